//! Similarity profiles over every admissible offset, and the Q matrix built
//! from them.
//!
//! Two routes compute the same profile. [`similarity_profile_naive`] evaluates
//! each window term by term through [`window_similarity`] and serves as the
//! reference. [`similarity_profile_fast`] precomputes per-trajectory tables
//! once:
//!
//! * SSE expands `‖y − x‖² = ‖y‖² − 2 y·x + ‖x‖²`; the sub-task norm is a
//!   constant, the sliding window norm comes from a prefix-sum table and only
//!   the cross term is accumulated per window.
//! * CCS is the cross term alone.
//! * COS normalizes every forward-difference tangent once, so a window is a
//!   plain sum of dot products of unit vectors.
//!
//! Offsets are independent and are evaluated through the crate's parallel map;
//! accumulation inside a window is always left to right over the sub-task.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::metrics::{dot, window_similarity, MetricKind, TANGENT_EPS};
use crate::par;
use crate::types::{QMatrix, SimilarityProfile, Trajectory};

fn check_pair(sub: &Trajectory, full: &Trajectory) -> Result<usize> {
    if sub.dim() != full.dim() {
        return Err(Error::DimensionMismatch {
            expected: sub.dim(),
            found: full.dim(),
        });
    }
    if sub.len() > full.len() {
        return Err(Error::SubtaskTooLong {
            sub: sub.len(),
            full: full.len(),
        });
    }
    Ok(full.len() - sub.len() + 1)
}

/// Reference profile: direct evaluation of every window, `O(T · t · d)`.
pub fn similarity_profile_naive(
    metric: MetricKind,
    sub: &Trajectory,
    full: &Trajectory,
) -> Result<SimilarityProfile> {
    let offsets = check_pair(sub, full)?;
    let values = (0..offsets)
        .map(|n| window_similarity(metric, sub, full, n))
        .collect::<Result<Vec<_>>>()?;
    SimilarityProfile::new(0, values)
}

/// Optimized profile, numerically equivalent to the naive route.
pub fn similarity_profile_fast(
    metric: MetricKind,
    sub: &Trajectory,
    full: &Trajectory,
) -> Result<SimilarityProfile> {
    let offsets = check_pair(sub, full)?;
    let values = match metric {
        MetricKind::Ccs => par::map_indexed(offsets, |n| cross_term(sub, full, n)),
        MetricKind::Sse => sse_profile(sub, full, offsets),
        MetricKind::Cos => cos_profile(sub, full, offsets),
    };
    SimilarityProfile::new(0, values)
}

fn cross_term(sub: &Trajectory, full: &Trajectory, offset: usize) -> f64 {
    let d = sub.dim();
    let window = &full.as_flat()[offset * d..(offset + sub.len()) * d];
    sub.as_flat()
        .chunks_exact(d)
        .zip(window.chunks_exact(d))
        .fold(0.0, |acc, (y, x)| acc + dot(y, x))
}

fn sse_profile(sub: &Trajectory, full: &Trajectory, offsets: usize) -> Vec<f64> {
    let t = sub.len();
    let sub_sq = sub.points().fold(0.0, |acc, y| acc + dot(y, y));
    let mut prefix = Vec::with_capacity(full.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for x in full.points() {
        acc += dot(x, x);
        prefix.push(acc);
    }
    par::map_indexed(offsets, |n| {
        let cross = cross_term(sub, full, n);
        let win_sq = prefix[n + t] - prefix[n];
        // Cancellation can leave a tiny positive residue on exact matches.
        let dist = ((sub_sq - cross) + (win_sq - cross)).max(0.0);
        0.0 - dist
    })
}

fn unit_tangents(t: &Trajectory) -> Vec<f64> {
    let d = t.dim();
    let mut out = Vec::with_capacity((t.len() - 1) * d);
    for m in 0..t.len() - 1 {
        let start = out.len();
        out.extend(t.point(m + 1).iter().zip(t.point(m)).map(|(b, a)| b - a));
        let tangent = &mut out[start..];
        let norm = dot(tangent, tangent).sqrt();
        if norm < TANGENT_EPS {
            tangent.fill(0.0);
        } else {
            tangent.iter_mut().for_each(|v| *v /= norm);
        }
    }
    out
}

fn cos_profile(sub: &Trajectory, full: &Trajectory, offsets: usize) -> Vec<f64> {
    let d = sub.dim();
    let sub_tan = unit_tangents(sub);
    let full_tan = unit_tangents(full);
    let terms = sub.len() - 1;
    par::map_indexed(offsets, |n| {
        let window = &full_tan[n * d..(n + terms) * d];
        sub_tan
            .chunks_exact(d)
            .zip(window.chunks_exact(d))
            .fold(0.0, |acc, (a, b)| acc + dot(a, b))
    })
}

/// Divides every window score by its number of summed terms.
pub fn mean_normalized(
    profile: &SimilarityProfile,
    metric: MetricKind,
    sub_len: usize,
) -> Result<SimilarityProfile> {
    let terms = metric.window_terms(sub_len) as f64;
    SimilarityProfile::new(
        profile.subtask(),
        profile.values().iter().map(|v| v / terms).collect(),
    )
}

/// Maximum of `values` over every window of length `window` covering each of
/// `total` points, using a monotonic deque.
fn covering_max(values: &[f64], window: usize, total: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(total);
    let mut deque: VecDeque<usize> = VecDeque::new();
    for k in 0..total {
        if k < values.len() {
            while deque.back().is_some_and(|&b| values[b] <= values[k]) {
                deque.pop_back();
            }
            deque.push_back(k);
        }
        while deque.front().is_some_and(|&f| f + window <= k) {
            deque.pop_front();
        }
        out.push(deque.front().map_or(f64::NEG_INFINITY, |&f| values[f]));
    }
    out
}

/// Builds the `T × M` Q matrix: entry `(k, i)` is the best score among the
/// windows of sub-task `i` that cover point `k`.
pub fn build_q(
    profiles: &[SimilarityProfile],
    lengths: &[usize],
    total_len: usize,
) -> Result<QMatrix> {
    if profiles.len() != lengths.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} profiles for {} sub-task lengths",
            profiles.len(),
            lengths.len()
        )));
    }
    for (i, (p, &t)) in profiles.iter().zip(lengths).enumerate() {
        if t == 0 || t > total_len || p.len() != total_len - t + 1 {
            return Err(Error::ShapeMismatch(format!(
                "profile {i} has {} offsets, expected T - t + 1 with T = {total_len}, t = {t}",
                p.len()
            )));
        }
    }
    let columns = par::map_indexed(profiles.len(), |i| {
        covering_max(profiles[i].values(), lengths[i], total_len)
    });
    QMatrix::from_columns(&columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(rows: &[&[f64]]) -> Trajectory {
        Trajectory::from_rows(rows).unwrap()
    }

    fn example() -> (Trajectory, Trajectory) {
        (
            traj(&[&[1.0], &[2.0]]),
            traj(&[&[0.0], &[1.0], &[2.0], &[3.0]]),
        )
    }

    #[test]
    fn naive_examples() {
        let (sub, full) = example();
        let sse = similarity_profile_naive(MetricKind::Sse, &sub, &full).unwrap();
        assert_eq!(sse.values(), &[-2.0, 0.0, -2.0]);
        let ccs = similarity_profile_naive(MetricKind::Ccs, &sub, &full).unwrap();
        assert_eq!(ccs.values(), &[2.0, 5.0, 8.0]);
        for m in MetricKind::ALL {
            assert_eq!(similarity_profile_naive(m, &full, &full).unwrap().len(), 1);
        }
    }

    #[test]
    fn fast_examples() {
        let (sub, full) = example();
        let sse = similarity_profile_fast(MetricKind::Sse, &sub, &full).unwrap();
        for (a, b) in sse.values().iter().zip([-2.0, 0.0, -2.0]) {
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0));
        }
        let self_sse = similarity_profile_fast(MetricKind::Sse, &full, &full).unwrap();
        assert_eq!(self_sse.values(), &[0.0]);
    }

    #[test]
    fn profile_errors() {
        let (sub, full) = example();
        assert!(matches!(
            similarity_profile_fast(MetricKind::Sse, &full, &sub),
            Err(Error::SubtaskTooLong { .. })
        ));
        let wide = traj(&[&[0.0, 0.0], &[1.0, 1.0]]);
        assert!(matches!(
            similarity_profile_naive(MetricKind::Cos, &wide, &full),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn build_q_examples() {
        let p = SimilarityProfile::new(0, vec![-2.0, 0.0, -2.0]).unwrap();
        let q = build_q(&[p], &[2], 4).unwrap();
        assert_eq!(q.column(0), vec![-2.0, 0.0, 0.0, -2.0]);

        let p = SimilarityProfile::new(0, vec![5.0]).unwrap();
        assert_eq!(build_q(&[p], &[6], 6).unwrap().column(0), vec![5.0; 6]);

        let p = SimilarityProfile::new(0, vec![1.5; 7]).unwrap();
        assert_eq!(build_q(&[p], &[4], 10).unwrap().column(0), vec![1.5; 10]);
    }

    #[test]
    fn build_q_rejects_bad_shapes() {
        let p = SimilarityProfile::new(0, vec![1.0, 2.0]).unwrap();
        assert!(build_q(std::slice::from_ref(&p), &[2], 4).is_err());
        assert!(build_q(std::slice::from_ref(&p), &[2, 3], 3).is_err());
        assert!(build_q(&[p], &[5], 3).is_err());
    }

    #[test]
    fn mean_normalization_divides_by_terms() {
        let p = SimilarityProfile::new(0, vec![4.0, 8.0]).unwrap();
        assert_eq!(
            mean_normalized(&p, MetricKind::Sse, 4).unwrap().values(),
            &[1.0, 2.0]
        );
        assert_eq!(
            mean_normalized(&p, MetricKind::Cos, 5).unwrap().values(),
            &[1.0, 2.0]
        );
    }
}
