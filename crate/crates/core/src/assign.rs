//! Turning profiles and the Q matrix into start indices and labelings.

use crate::error::{Error, Result};
use crate::types::{Labeling, QMatrix, SimilarityProfile, SENTINEL, UNLABELED};

/// Index of the first maximum; `None` for an empty slice.
fn first_argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Most likely start offset of a sub-task: the first offset with the highest score.
pub fn predicted_start(profile: &SimilarityProfile) -> usize {
    first_argmax(profile.values()).expect("profiles are non-empty by construction")
}

/// Labels every point with the sub-task whose covering windows score best.
/// Ties go to the lowest class index.
pub fn assign_dense(q: &QMatrix) -> Result<Labeling> {
    let mut classes = Vec::with_capacity(q.rows());
    for k in 0..q.rows() {
        let row = q.row(k);
        if let Some(col) = row.iter().position(|&v| v == SENTINEL) {
            return Err(Error::UnresolvedSentinel { row: k, col });
        }
        let best = first_argmax(row)
            .ok_or_else(|| Error::ShapeMismatch("Q matrix has no sub-task columns".to_string()))?;
        classes.push(best as i32);
    }
    Labeling::new(classes, q.cols())
}

/// Greedy gap-allowing assignment.
///
/// Repeatedly takes the sub-task holding the global maximum of Q, labels the
/// still-unlabeled points from the first row attaining its column maximum
/// (at most `t_i` of them, stopping at the first labeled point), then retires
/// that column and the claimed rows. Each sub-task is placed at most once;
/// points never claimed stay [`UNLABELED`].
pub fn assign_greedy_gaps(q: &QMatrix, lengths: &[usize]) -> Result<Labeling> {
    assign_greedy_gaps_with_starts(q, lengths).map(|(labeling, _)| labeling)
}

/// Same as [`assign_greedy_gaps`], also returning where each sub-task was
/// placed (`None` if it claimed no points).
pub fn assign_greedy_gaps_with_starts(
    q: &QMatrix,
    lengths: &[usize],
) -> Result<(Labeling, Vec<Option<usize>>)> {
    let (rows, cols) = (q.rows(), q.cols());
    if lengths.len() != cols {
        return Err(Error::ShapeMismatch(format!(
            "{} sub-task lengths for {cols} Q columns",
            lengths.len()
        )));
    }
    let mut q = q.clone();
    let mut z = vec![UNLABELED; rows];
    let mut starts = vec![None; cols];
    loop {
        let best = q.max();
        if best == SENTINEL {
            break;
        }
        // First column containing the global max is the first argmax of the column maxima.
        let (class, start) = (0..cols)
            .find_map(|i| (0..rows).find(|&k| q.get(k, i) == best).map(|k| (i, k)))
            .expect("global maximum is attained");
        let mut claimed = 0;
        while start + claimed < rows && z[start + claimed] == UNLABELED && claimed < lengths[class]
        {
            claimed += 1;
        }
        z[start..start + claimed].fill(class as i32);
        if claimed > 0 {
            starts[class] = Some(start);
        }
        q.clear_column(class);
        q.clear_rows(start..start + claimed);
    }
    Ok((Labeling::new(z, cols)?, starts))
}
