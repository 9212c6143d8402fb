//! Point-wise accuracy against a ground-truth labeling.

use crate::error::{Error, Result};
use crate::types::{Labeling, UNLABELED};

#[derive(Debug, Clone, PartialEq)]
pub struct Accuracy {
    /// Recall per class: share of the points truly in class `c` that were
    /// predicted as `c`. `None` when the truth has no point of that class.
    pub per_class: Vec<Option<f64>>,
    /// Share of all points whose prediction equals the truth, gaps included.
    pub overall: f64,
}

fn check_lengths(pred: &Labeling, truth: &Labeling) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            found: pred.len(),
        });
    }
    Ok(())
}

pub fn accuracy(pred: &Labeling, truth: &Labeling) -> Result<Accuracy> {
    check_lengths(pred, truth)?;
    let m = truth.num_classes().max(pred.num_classes());
    let mut hits = vec![0usize; m];
    let mut support = vec![0usize; m];
    let mut matched = 0usize;
    for (&p, &t) in pred.classes().iter().zip(truth.classes()) {
        if p == t {
            matched += 1;
        }
        if t != UNLABELED {
            support[t as usize] += 1;
            if p == t {
                hits[t as usize] += 1;
            }
        }
    }
    let per_class = hits
        .iter()
        .zip(&support)
        .map(|(&h, &s)| (s > 0).then(|| h as f64 / s as f64))
        .collect();
    let overall = if truth.is_empty() {
        1.0
    } else {
        matched as f64 / truth.len() as f64
    };
    Ok(Accuracy { per_class, overall })
}

/// `(M + 1) × (M + 1)` counts indexed by `label + 1`, so index 0 is the gap
/// label. Rows are truth, columns are prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Confusion {
    counts: Vec<Vec<usize>>,
}

impl Confusion {
    pub fn counts(&self) -> &[Vec<usize>] {
        &self.counts
    }

    pub fn get(&self, truth: i32, pred: i32) -> usize {
        self.counts[(truth + 1) as usize][(pred + 1) as usize]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.counts.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn transpose(&self) -> Self {
        let n = self.counts.len();
        Self {
            counts: (0..n)
                .map(|c| (0..n).map(|r| self.counts[r][c]).collect())
                .collect(),
        }
    }
}

pub fn confusion(pred: &Labeling, truth: &Labeling) -> Result<Confusion> {
    check_lengths(pred, truth)?;
    let n = truth.num_classes().max(pred.num_classes()) + 1;
    let mut counts = vec![vec![0usize; n]; n];
    for (&p, &t) in pred.classes().iter().zip(truth.classes()) {
        counts[(t + 1) as usize][(p + 1) as usize] += 1;
    }
    Ok(Confusion { counts })
}
