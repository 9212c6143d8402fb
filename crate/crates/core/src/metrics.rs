//! Point-wise similarity metrics and the window similarity built from them.
//!
//! Every metric is higher-is-better so that the best alignment is always an
//! argmax.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Trajectory;

/// Tangents shorter than this are treated as stationary.
pub const TANGENT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    /// Raw dot product.
    Ccs,
    /// Negative squared Euclidean distance.
    Sse,
    /// Cosine between forward-difference tangents.
    Cos,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::Ccs, MetricKind::Sse, MetricKind::Cos];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Ccs => "ccs",
            MetricKind::Sse => "sse",
            MetricKind::Cos => "cos",
        }
    }

    /// Number of summed terms in a window of a `sub_len`-point sub-task.
    pub fn window_terms(self, sub_len: usize) -> usize {
        match self {
            MetricKind::Ccs | MetricKind::Sse => sub_len,
            MetricKind::Cos => sub_len - 1,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ccs" => Ok(MetricKind::Ccs),
            "sse" => Ok(MetricKind::Sse),
            "cos" => Ok(MetricKind::Cos),
            other => Err(Error::InvalidConfig(format!(
                "unknown metric {other:?}, expected ccs, sse or cos"
            ))),
        }
    }
}

fn check_dims(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn sim_ccs(y: &[f64], x: &[f64]) -> Result<f64> {
    check_dims(y, x)?;
    Ok(dot(y, x))
}

pub fn sim_sse(y: &[f64], x: &[f64]) -> Result<f64> {
    check_dims(y, x)?;
    Ok(-y.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
}

/// Cosine of the angle between two tangents; 0 when either is degenerate.
pub fn sim_cos_tangent(a: &[f64], b: &[f64]) -> Result<f64> {
    check_dims(a, b)?;
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na < TANGENT_EPS || nb < TANGENT_EPS {
        return Ok(0.0);
    }
    Ok((dot(a, b) / (na * nb)).clamp(-1.0, 1.0))
}

fn forward_difference(t: &Trajectory, index: usize) -> Vec<f64> {
    t.point(index + 1)
        .iter()
        .zip(t.point(index))
        .map(|(next, cur)| next - cur)
        .collect()
}

/// Similarity of `sub` aligned with `full` at `offset`, evaluated term by term.
pub fn window_similarity(
    metric: MetricKind,
    sub: &Trajectory,
    full: &Trajectory,
    offset: usize,
) -> Result<f64> {
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
    let max = full.len() - sub.len();
    if offset > max {
        return Err(Error::OffsetOutOfRange { offset, max });
    }
    let mut total = 0.0;
    match metric {
        MetricKind::Ccs => {
            for m in 0..sub.len() {
                total += sim_ccs(sub.point(m), full.point(m + offset))?;
            }
        }
        MetricKind::Sse => {
            for m in 0..sub.len() {
                total += sim_sse(sub.point(m), full.point(m + offset))?;
            }
        }
        MetricKind::Cos => {
            for m in 0..sub.len() - 1 {
                let a = forward_difference(sub, m);
                let b = forward_difference(full, m + offset);
                total += sim_cos_tangent(&a, &b)?;
            }
        }
    }
    Ok(total)
}
