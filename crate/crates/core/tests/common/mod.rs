#![allow(dead_code)]

use corrseg_core::Trajectory;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Nested-loop Q construction: every window writes its score into every
/// point it covers.
pub fn build_q_nested(profiles: &[Vec<f64>], lengths: &[usize], total: usize) -> Vec<Vec<f64>> {
    let mut q = vec![vec![f64::NEG_INFINITY; profiles.len()]; total];
    for (i, (profile, &t)) in profiles.iter().zip(lengths).enumerate() {
        for (j, &s) in profile.iter().enumerate() {
            for row in q.iter_mut().skip(j).take(t) {
                row[i] = row[i].max(s);
            }
        }
    }
    q
}

/// Relative error with the naive value as reference.
pub fn rel_err(fast: f64, naive: f64) -> f64 {
    if fast == naive {
        0.0
    } else {
        (fast - naive).abs() / naive.abs()
    }
}

pub struct Instance {
    pub full: Trajectory,
    pub subs: Vec<Trajectory>,
}

/// Random trajectories with `T ≤ 500`, `t ≤ 80`, `d ≤ 4`.
pub fn random_instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.random_range(1..=4);
    let t_full = rng.random_range(80..=500);
    let walk = |rng: &mut ChaCha8Rng, len: usize| {
        let mut pos = vec![0.0; d];
        let mut data = Vec::with_capacity(len * d);
        for _ in 0..len {
            for p in pos.iter_mut() {
                *p += rng.random_range(-1.0..1.0);
            }
            data.extend_from_slice(&pos);
        }
        Trajectory::from_flat(data, d).unwrap()
    };
    let full = walk(&mut rng, t_full);
    let m = rng.random_range(1..=3);
    let subs = (0..m)
        .map(|_| {
            let t = rng.random_range(2..=80);
            walk(&mut rng, t)
        })
        .collect();
    Instance { full, subs }
}

/// Literal trace of the greedy gap-allowing assignment on a row-major Q.
pub fn greedy_trace(q: &[Vec<f64>], lengths: &[usize]) -> Vec<i32> {
    let mut q: Vec<Vec<f64>> = q.to_vec();
    let rows = q.len();
    let cols = lengths.len();
    let mut z = vec![-1i32; rows];
    loop {
        let col_max: Vec<f64> = (0..cols)
            .map(|i| q.iter().map(|r| r[i]).fold(f64::NEG_INFINITY, f64::max))
            .collect();
        let global = col_max.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if global == f64::NEG_INFINITY {
            break;
        }
        let i = col_max.iter().position(|&v| v == global).unwrap();
        let j = (0..rows).position(|k| q[k][i] == col_max[i]).unwrap();
        let mut k = 0;
        while j + k < rows && z[j + k] == -1 && k < lengths[i] {
            k += 1;
        }
        for zz in &mut z[j..j + k] {
            *zz = i as i32;
        }
        for row in q.iter_mut() {
            row[i] = f64::NEG_INFINITY;
        }
        for row in &mut q[j..j + k] {
            row.fill(f64::NEG_INFINITY);
        }
    }
    z
}
