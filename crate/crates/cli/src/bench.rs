//! Wall-clock scaling benchmark of the segmentation pipeline.
//!
//! Times profiles + Q matrix + assignment on seeded random-walk data, first
//! over a grid of full-task lengths with everything else fixed, then over a
//! grid of sub-task counts. Each point is the median of several runs. The
//! growth exponent is the least-squares slope of `ln(time)` over `ln(size)`.

use std::fmt;
use std::time::Instant;

use corrseg_core::{AssignMode, MetricKind, Segmenter, SubTask, SubTaskLibrary, Trajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub subtasks: usize,
    pub sub_len: usize,
    pub dim: usize,
    pub runs: usize,
    /// Sub-task counts swept at the first entry of `sizes`.
    pub subtask_sizes: Vec<usize>,
    pub metric: MetricKind,
    pub mode: AssignMode,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![2000, 4000, 8000, 16000],
            subtasks: 5,
            sub_len: 400,
            dim: 3,
            runs: 5,
            subtask_sizes: vec![5, 10, 20],
            metric: MetricKind::Sse,
            mode: AssignMode::Dense,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub len: usize,
    pub subtasks: usize,
    pub sub_len: usize,
    pub seconds: Vec<f64>,
}

impl BenchRow {
    pub fn median(&self) -> f64 {
        let mut s = self.seconds.clone();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        if n % 2 == 1 {
            s[n / 2]
        } else {
            0.5 * (s[n / 2 - 1] + s[n / 2])
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub by_len: Vec<BenchRow>,
    pub by_subtasks: Vec<BenchRow>,
    pub threads: usize,
}

fn ratios(rows: &[BenchRow]) -> Vec<f64> {
    rows.windows(2)
        .map(|w| w[1].median() / w[0].median())
        .collect()
}

fn growth_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (x.ln(), y.max(1e-12).ln()))
        .collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl BenchReport {
    /// Median-time ratio between consecutive full-task lengths.
    pub fn len_ratios(&self) -> Vec<f64> {
        ratios(&self.by_len)
    }

    pub fn subtask_ratios(&self) -> Vec<f64> {
        ratios(&self.by_subtasks)
    }

    pub fn len_exponent(&self) -> Option<f64> {
        let pts: Vec<_> = self
            .by_len
            .iter()
            .map(|r| (r.len as f64, r.median()))
            .collect();
        growth_exponent(&pts)
    }

    pub fn subtask_exponent(&self) -> Option<f64> {
        let pts: Vec<_> = self
            .by_subtasks
            .iter()
            .map(|r| (r.subtasks as f64, r.median()))
            .collect();
        growth_exponent(&pts)
    }
}

fn write_table(f: &mut fmt::Formatter<'_>, rows: &[BenchRow]) -> fmt::Result {
    writeln!(
        f,
        "{:>8} {:>4} {:>6} {:>12} {:>8}",
        "T", "M", "t", "median_s", "ratio"
    )?;
    for (i, row) in rows.iter().enumerate() {
        let ratio = if i == 0 {
            "-".to_string()
        } else {
            format!("{:.3}", row.median() / rows[i - 1].median())
        };
        writeln!(
            f,
            "{:>8} {:>4} {:>6} {:>12.6} {:>8}",
            row.len,
            row.subtasks,
            row.sub_len,
            row.median(),
            ratio
        )?;
    }
    Ok(())
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "threads: {}", self.threads)?;
        writeln!(f, "scaling in full-task length T")?;
        write_table(f, &self.by_len)?;
        if let Some(e) = self.len_exponent() {
            writeln!(f, "fitted exponent in T: {e:.3}")?;
        }
        if !self.by_subtasks.is_empty() {
            writeln!(f, "scaling in sub-task count M")?;
            write_table(f, &self.by_subtasks)?;
            if let Some(e) = self.subtask_exponent() {
                writeln!(f, "fitted exponent in M: {e:.3}")?;
            }
        }
        Ok(())
    }
}

fn random_walk(rng: &mut ChaCha8Rng, len: usize, dim: usize) -> Trajectory {
    let mut pos = vec![0.0; dim];
    let mut data = Vec::with_capacity(len * dim);
    for _ in 0..len {
        for p in &mut pos {
            *p += rng.random_range(-1.0..1.0);
        }
        data.extend_from_slice(&pos);
    }
    Trajectory::from_flat(data, dim).expect("random walk is a valid trajectory")
}

fn time_case(cfg: &BenchConfig, len: usize, subtasks: usize) -> CliResult<BenchRow> {
    let sub_len = cfg.sub_len.min(len).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (len as u64) << 8 ^ subtasks as u64);
    let full = random_walk(&mut rng, len, cfg.dim);
    let entries = (0..subtasks)
        .map(|i| SubTask {
            name: format!("s{i}"),
            demo: random_walk(&mut rng, sub_len, cfg.dim),
        })
        .collect();
    let library = SubTaskLibrary::new(entries)?;
    let segmenter = Segmenter::new(cfg.metric, cfg.mode);
    let mut seconds = Vec::with_capacity(cfg.runs);
    for _ in 0..cfg.runs {
        let start = Instant::now();
        let result = segmenter
            .segment(&library, &full)
            .map_err(|e| CliError::Internal(e.to_string()))?;
        seconds.push(start.elapsed().as_secs_f64());
        std::hint::black_box(result);
    }
    Ok(BenchRow {
        len,
        subtasks,
        sub_len,
        seconds,
    })
}

pub fn run(cfg: &BenchConfig) -> CliResult<BenchReport> {
    if cfg.sizes.is_empty() || cfg.runs == 0 || cfg.subtasks == 0 || cfg.dim == 0 {
        return Err(CliError::Input(
            "bench needs at least one size, one run, one sub-task and d ≥ 1".into(),
        ));
    }
    if let Some(&bad) = cfg.sizes.iter().find(|&&s| s < 2) {
        return Err(CliError::Input(format!("bench size {bad} is below 2")));
    }
    // Warm-up so the first timed case does not pay for page faults or pool start-up.
    time_case(
        &BenchConfig {
            runs: 1,
            ..cfg.clone()
        },
        cfg.sizes[0],
        cfg.subtasks,
    )?;
    let by_len = cfg
        .sizes
        .iter()
        .map(|&len| time_case(cfg, len, cfg.subtasks))
        .collect::<CliResult<Vec<_>>>()?;
    let by_subtasks = cfg
        .subtask_sizes
        .iter()
        .filter(|&&m| m > 0)
        .map(|&m| time_case(cfg, cfg.sizes[0], m))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(BenchReport {
        by_len,
        by_subtasks,
        threads: corrseg_core::current_threads(),
    })
}
