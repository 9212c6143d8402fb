//! Deterministic synthetic demonstrations with exact ground truth.
//!
//! A corpus is a chain of parametric sub-task shapes. Each shape is placed at
//! a seeded position and orientation, starting a short hop away from where the
//! previous one ended. The full task concatenates the placed shapes, joined by
//! optional gap segments that blend smoothly from one shape's last point to the
//! next shape's first point. Library demonstrations re-render the same placed
//! shapes with a per-sub-task perturbation (scale about the first point,
//! translation, tempo change), so they differ from the embedded instances the
//! way a second demonstration would.
//!
//! Randomness comes from `ChaCha8Rng` seeded with the spec's seed; Gaussian
//! noise is drawn with `rand_distr::Normal`. Draw order is fixed: placements
//! for every sub-task, then full-task noise row by row, then library noise
//! demo by demo.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Labeling, SubTask, SubTaskLibrary, Trajectory, UNLABELED};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    Loop,
    Arc,
    Line,
    Zigzag,
    PickPlace,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 5] = [
        ShapeKind::Loop,
        ShapeKind::Arc,
        ShapeKind::Line,
        ShapeKind::Zigzag,
        ShapeKind::PickPlace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Loop => "loop",
            ShapeKind::Arc => "arc",
            ShapeKind::Line => "line",
            ShapeKind::Zigzag => "zigzag",
            ShapeKind::PickPlace => "pick-place",
        }
    }

    /// Canonical 3-D point at parameter `u ∈ [0, 1]`, starting at the origin.
    fn eval(self, u: f64, amp: f64) -> [f64; 3] {
        let lift = 0.1 * amp * (PI * u).sin();
        match self {
            ShapeKind::Line => [amp * u, 0.25 * amp * u, lift],
            ShapeKind::Arc => [amp * (1.0 - (PI * u).cos()), amp * (PI * u).sin(), lift],
            ShapeKind::Loop => [
                0.6 * amp * (TAU * u).sin() + 0.8 * amp * u,
                0.6 * amp * (1.0 - (TAU * u).cos()),
                lift,
            ],
            ShapeKind::Zigzag => {
                let s = 3.0 * u;
                let tri = 1.0 - (2.0 * (s - s.floor()) - 1.0).abs();
                [amp * u, 0.3 * amp * tri, lift]
            }
            ShapeKind::PickPlace => {
                let travel = u * u * (3.0 - 2.0 * u);
                let up = (PI * u).sin().powi(2);
                [amp * travel, 0.5 * amp * up, 0.5 * amp * up]
            }
        }
    }
}

/// Differences between a library demonstration and the embedded instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// Added to every point; empty means zero.
    #[serde(default)]
    pub translation: Vec<f64>,
    /// Scale about the demonstration's first point.
    #[serde(default = "one")]
    pub scale: f64,
    /// Library demo has `round(t · tempo)` samples.
    #[serde(default = "one")]
    pub tempo: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for Perturbation {
    fn default() -> Self {
        Self {
            translation: Vec::new(),
            scale: 1.0,
            tempo: 1.0,
        }
    }
}

impl Perturbation {
    pub fn is_identity(&self) -> bool {
        self.scale == 1.0 && self.tempo == 1.0 && self.translation.iter().all(|&v| v == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubTaskSpec {
    pub kind: ShapeKind,
    pub length: usize,
    pub amplitude: f64,
    #[serde(default)]
    pub perturbation: Perturbation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub seed: u64,
    pub dim: usize,
    pub subtasks: Vec<SubTaskSpec>,
    /// Samples between consecutive sub-tasks; empty means no gaps, otherwise
    /// one entry per adjacent pair.
    #[serde(default)]
    pub gap_lengths: Vec<usize>,
    #[serde(default)]
    pub noise_sigma: f64,
}

impl CorpusSpec {
    /// `m` sub-tasks of distinct-as-possible shapes with lengths in
    /// `[100, 200]`, unit amplitude, no gaps, no noise, identity perturbations.
    pub fn standard(seed: u64, m: usize, dim: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_c0de);
        let mut kinds = ShapeKind::ALL.to_vec();
        for i in (1..kinds.len()).rev() {
            kinds.swap(i, rng.random_range(0..=i));
        }
        let subtasks = (0..m)
            .map(|i| SubTaskSpec {
                kind: kinds[i % kinds.len()],
                length: rng.random_range(100..=200),
                amplitude: 1.0,
                perturbation: Perturbation::default(),
            })
            .collect();
        Self {
            seed,
            dim,
            subtasks,
            gap_lengths: Vec::new(),
            noise_sigma: 0.0,
        }
    }

    pub fn with_gaps(mut self, gaps: Vec<usize>) -> Self {
        self.gap_lengths = gaps;
        self
    }

    pub fn with_noise(mut self, sigma: f64) -> Self {
        self.noise_sigma = sigma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(2..=3).contains(&self.dim) {
            return bad(format!("corpus dimension must be 2 or 3, got {}", self.dim));
        }
        if self.subtasks.is_empty() {
            return Err(Error::EmptyLibrary);
        }
        if !self.gap_lengths.is_empty() && self.gap_lengths.len() != self.subtasks.len() - 1 {
            return bad(format!(
                "{} gap lengths for {} sub-tasks",
                self.gap_lengths.len(),
                self.subtasks.len()
            ));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return bad(format!("noise sigma must be ≥ 0, got {}", self.noise_sigma));
        }
        for (i, s) in self.subtasks.iter().enumerate() {
            let p = &s.perturbation;
            if s.length < 2 {
                return bad(format!("sub-task {i} length must be ≥ 2"));
            }
            if !(s.amplitude.is_finite() && s.amplitude > 0.0) {
                return bad(format!("sub-task {i} amplitude must be > 0"));
            }
            if !(p.scale.is_finite() && p.scale > 0.0) || !(p.tempo.is_finite() && p.tempo > 0.0) {
                return bad(format!("sub-task {i} scale and tempo must be > 0"));
            }
            if !p.translation.is_empty() && p.translation.len() != self.dim {
                return bad(format!(
                    "sub-task {i} translation has {} components, expected {}",
                    p.translation.len(),
                    self.dim
                ));
            }
            if p.translation.iter().any(|v| !v.is_finite()) {
                return bad(format!("sub-task {i} translation must be finite"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    pub full: Trajectory,
    pub library: SubTaskLibrary,
    pub truth: Labeling,
}

struct Placement {
    origin: [f64; 3],
    angle: f64,
}

impl Placement {
    fn render(&self, spec: &SubTaskSpec, samples: usize, dim: usize) -> Vec<Vec<f64>> {
        let (sin, cos) = self.angle.sin_cos();
        (0..samples)
            .map(|m| {
                let u = m as f64 / (samples - 1) as f64;
                let [x, y, z] = spec.kind.eval(u, spec.amplitude);
                let p = [
                    self.origin[0] + cos * x - sin * y,
                    self.origin[1] + sin * x + cos * y,
                    self.origin[2] + z,
                ];
                p[..dim].to_vec()
            })
            .collect()
    }
}

fn smoothstep_gap(from: &[f64], to: &[f64], len: usize) -> Vec<Vec<f64>> {
    (0..len)
        .map(|k| {
            let s = (k + 1) as f64 / (len + 1) as f64;
            let w = s * s * (3.0 - 2.0 * s);
            from.iter().zip(to).map(|(a, b)| a + w * (b - a)).collect()
        })
        .collect()
}

/// Renders the full task, the perturbed library and the ground-truth labels.
pub fn generate(spec: &CorpusSpec) -> Result<Corpus> {
    spec.validate()?;
    let dim = spec.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut placements = Vec::with_capacity(spec.subtasks.len());
    let mut cursor = [0.0f64; 3];
    for s in &spec.subtasks {
        let hop_angle = rng.random_range(0.0..TAU);
        let hop_len = s.amplitude * rng.random_range(0.5..1.0);
        let origin = [
            cursor[0] + hop_len * hop_angle.cos(),
            cursor[1] + hop_len * hop_angle.sin(),
            0.0,
        ];
        let placement = Placement {
            origin,
            angle: rng.random_range(0.0..TAU),
        };
        let end = placement.render(s, s.length, 3);
        cursor = [end[s.length - 1][0], end[s.length - 1][1], 0.0];
        placements.push(placement);
    }

    let mut full_rows: Vec<Vec<f64>> = Vec::new();
    let mut truth = Vec::new();
    let mut previous_end: Option<Vec<f64>> = None;
    for (i, (s, p)) in spec.subtasks.iter().zip(&placements).enumerate() {
        let rows = p.render(s, s.length, dim);
        if let (Some(prev), Some(&gap)) = (&previous_end, spec.gap_lengths.get(i.wrapping_sub(1))) {
            full_rows.extend(smoothstep_gap(prev, &rows[0], gap));
            truth.extend(std::iter::repeat_n(UNLABELED, gap));
        }
        previous_end = rows.last().cloned();
        full_rows.extend(rows);
        truth.extend(std::iter::repeat_n(i as i32, s.length));
    }

    let mut demos = Vec::with_capacity(spec.subtasks.len());
    for (s, p) in spec.subtasks.iter().zip(&placements) {
        let pert = &s.perturbation;
        let samples = ((s.length as f64 * pert.tempo).round() as usize).max(2);
        let mut rows = p.render(s, samples, dim);
        let anchor = rows[0].clone();
        for row in &mut rows {
            for (c, v) in row.iter_mut().enumerate() {
                if pert.scale != 1.0 {
                    *v = anchor[c] + pert.scale * (*v - anchor[c]);
                }
                if let Some(t) = pert.translation.get(c) {
                    *v += t;
                }
            }
        }
        demos.push(rows);
    }

    if spec.noise_sigma > 0.0 {
        let normal =
            Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        for v in full_rows
            .iter_mut()
            .chain(demos.iter_mut().flatten())
            .flatten()
        {
            *v += normal.sample(&mut rng);
        }
    }

    let full = Trajectory::from_rows(&full_rows)?;
    let entries = spec
        .subtasks
        .iter()
        .zip(demos)
        .enumerate()
        .map(|(i, (s, rows))| {
            Ok(SubTask {
                name: format!("{}_{i}", s.kind.name()),
                demo: Trajectory::from_rows(&rows)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus {
        full,
        library: SubTaskLibrary::new(entries)?,
        truth: Labeling::new(truth, spec.subtasks.len())?,
    })
}
