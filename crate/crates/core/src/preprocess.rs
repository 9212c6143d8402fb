//! Savitzky-Golay smoothing and uniform resampling.
//!
//! Both operate on each coordinate independently. The same preprocessing has
//! to be applied to the full task and to every sub-task demonstration; that
//! is the caller's job.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::types::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SavGolConfig {
    window: usize,
    polyorder: usize,
}

impl SavGolConfig {
    pub fn new(window: usize, polyorder: usize) -> Result<Self> {
        if window < 3 || window.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!(
                "Savitzky-Golay window must be odd and at least 3, got {window}"
            )));
        }
        if polyorder >= window {
            return Err(Error::InvalidConfig(format!(
                "polyorder {polyorder} must be smaller than the window {window}"
            )));
        }
        Ok(Self { window, polyorder })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn polyorder(&self) -> usize {
        self.polyorder
    }

    /// Convolution weights that evaluate the least-squares polynomial fit of
    /// a window at its center sample.
    pub fn coefficients(&self) -> Vec<f64> {
        let half = (self.window / 2) as f64;
        let cols = self.polyorder + 1;
        // Abscissae scaled to [-1, 1] for conditioning; the center value is
        // the constant term either way.
        let design = DMatrix::from_fn(self.window, cols, |r, c| {
            ((r as f64 - half) / half).powi(c as i32)
        });
        let pinv = design
            .pseudo_inverse(1e-14)
            .expect("design matrix pseudo-inverse");
        pinv.row(0).iter().copied().collect()
    }
}

fn mirror(index: isize, len: usize) -> usize {
    let last = len as isize - 1;
    let i = if index < 0 {
        -index
    } else if index > last {
        2 * last - index
    } else {
        index
    };
    i as usize
}

fn filter_signal(signal: &[f64], coeffs: &[f64]) -> Vec<f64> {
    let half = (coeffs.len() / 2) as isize;
    (0..signal.len() as isize)
        .map(|center| {
            coeffs.iter().enumerate().fold(0.0, |acc, (j, &w)| {
                acc + w * signal[mirror(center + j as isize - half, signal.len())]
            })
        })
        .collect()
}

/// Smooths every dimension with a Savitzky-Golay filter, mirroring the signal
/// (without repeating the edge sample) at both ends.
pub fn savgol_smooth(traj: &Trajectory, cfg: &SavGolConfig) -> Result<Trajectory> {
    if cfg.window > traj.len() {
        return Err(Error::InvalidConfig(format!(
            "Savitzky-Golay window {} exceeds trajectory length {}",
            cfg.window,
            traj.len()
        )));
    }
    let coeffs = cfg.coefficients();
    let dim = traj.dim();
    let columns = par::map_indexed(dim, |c| filter_signal(&traj.column(c), &coeffs));
    let mut data = Vec::with_capacity(traj.len() * dim);
    for k in 0..traj.len() {
        data.extend(columns.iter().map(|col| col[k]));
    }
    Trajectory::from_flat(data, dim)
}

/// Piecewise-linear resampling to `n_out` points at uniformly spaced
/// fractional indices over `[0, T - 1]`. Endpoints are kept exactly.
pub fn resample(traj: &Trajectory, n_out: usize) -> Result<Trajectory> {
    if n_out < 2 {
        return Err(Error::InvalidConfig(format!(
            "resampling needs at least 2 output points, got {n_out}"
        )));
    }
    let last = traj.len() - 1;
    let dim = traj.dim();
    let mut data = Vec::with_capacity(n_out * dim);
    for j in 0..n_out {
        if j == n_out - 1 {
            data.extend_from_slice(traj.point(last));
            continue;
        }
        let pos = (j * last) as f64 / (n_out - 1) as f64;
        let lo = (pos.floor() as usize).min(last);
        let frac = pos - lo as f64;
        if frac == 0.0 || lo == last {
            data.extend_from_slice(traj.point(lo));
        } else {
            let (a, b) = (traj.point(lo), traj.point(lo + 1));
            data.extend(a.iter().zip(b).map(|(x, y)| x + frac * (y - x)));
        }
    }
    Trajectory::from_flat(data, dim)
}
