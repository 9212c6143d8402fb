//! Subcommand implementations, kept free of argument parsing so tests can
//! call them directly.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use corrseg_core::eval::{accuracy, Accuracy};
use corrseg_core::preprocess::{resample, savgol_smooth, SavGolConfig};
use corrseg_core::synth::{self, CorpusSpec};
use corrseg_core::{
    AssignMode, Labeling, MetricKind, SegmentationResult, Segmenter, SubTask, SubTaskLibrary,
    Trajectory,
};

use crate::bench::{self, BenchConfig};
use crate::error::{CliError, CliResult};
use crate::io::{load_labels, load_trajectory, save_labels, save_trajectory};
use crate::manifest::{load_dataset, Dataset, DatasetManifest, SubTaskEntry};
use crate::svg;

/// Optional smoothing and resampling applied identically to the full task and
/// every sub-task demonstration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Preprocessing {
    pub smooth: Option<SavGolConfig>,
    /// Output length of the full task; sub-tasks are resampled by the same ratio.
    pub resample: Option<usize>,
}

impl Preprocessing {
    pub fn from_flags(
        window: Option<usize>,
        polyorder: Option<usize>,
        resample: Option<usize>,
    ) -> CliResult<Self> {
        let smooth = match (window, polyorder) {
            (Some(w), Some(p)) => Some(SavGolConfig::new(w, p)?),
            (None, None) => None,
            _ => {
                return Err(CliError::Input(
                    "--smooth-window and --smooth-polyorder must be given together".into(),
                ))
            }
        };
        if resample.is_some_and(|n| n < 2) {
            return Err(CliError::Input("--resample needs at least 2 points".into()));
        }
        Ok(Self { smooth, resample })
    }

    pub fn is_identity(&self) -> bool {
        self.smooth.is_none() && self.resample.is_none()
    }

    fn smooth_one(&self, traj: &Trajectory, what: &str) -> CliResult<Trajectory> {
        match &self.smooth {
            Some(cfg) => {
                savgol_smooth(traj, cfg).map_err(|e| CliError::Input(format!("{what}: {e}")))
            }
            None => Ok(traj.clone()),
        }
    }

    pub fn apply_trajectory(&self, traj: &Trajectory) -> CliResult<Trajectory> {
        let smoothed = self.smooth_one(traj, "trajectory")?;
        match self.resample {
            Some(n) => Ok(resample(&smoothed, n)?),
            None => Ok(smoothed),
        }
    }

    pub fn apply(&self, ds: &Dataset) -> CliResult<Dataset> {
        if self.is_identity() {
            return Ok(ds.clone());
        }
        let full = self.smooth_one(&ds.full, "full task")?;
        let ratio = self.resample.map(|n| n as f64 / ds.full.len() as f64);
        let full = match self.resample {
            Some(n) => resample(&full, n)?,
            None => full,
        };
        let mut entries = Vec::with_capacity(ds.library.len());
        for e in ds.library.entries() {
            let demo = self.smooth_one(&e.demo, &e.name)?;
            let demo = match ratio {
                Some(r) => {
                    let n = ((e.demo.len() as f64 * r).round() as usize).clamp(2, full.len());
                    resample(&demo, n)?
                }
                None => demo,
            };
            entries.push(SubTask {
                name: e.name.clone(),
                demo,
            });
        }
        let truth = match (&ds.truth, self.resample) {
            (Some(t), Some(n)) => Some(resample_labels(t, n)?),
            (t, _) => t.clone(),
        };
        Ok(Dataset {
            full,
            library: SubTaskLibrary::new(entries)?,
            truth,
        })
    }
}

/// Nearest-sample resampling of a labeling, matching the positions used by
/// trajectory resampling.
pub fn resample_labels(labels: &Labeling, n_out: usize) -> CliResult<Labeling> {
    let last = labels.len().saturating_sub(1);
    let classes = (0..n_out)
        .map(|j| {
            let pos = (j * last) as f64 / (n_out - 1) as f64;
            labels.classes()[(pos.round() as usize).min(last)]
        })
        .collect();
    Ok(Labeling::new(classes, labels.num_classes())?)
}

fn internal(err: corrseg_core::Error) -> CliError {
    CliError::Internal(err.to_string())
}

pub fn run_segmenter(ds: &Dataset, segmenter: &Segmenter) -> CliResult<SegmentationResult> {
    segmenter.segment(&ds.library, &ds.full).map_err(internal)
}

#[derive(Debug, Clone)]
pub struct SegmentArgs {
    pub manifest: PathBuf,
    pub metric: MetricKind,
    pub mode: AssignMode,
    pub pre: Preprocessing,
    pub mean_normalize: bool,
    pub out: PathBuf,
}

#[derive(Debug, Clone)]
pub struct SegmentOutput {
    pub result: SegmentationResult,
    pub accuracy: Option<Accuracy>,
    pub summary: String,
}

pub fn segment(args: &SegmentArgs) -> CliResult<SegmentOutput> {
    let ds = args.pre.apply(&load_dataset(&args.manifest)?)?;
    let segmenter = Segmenter {
        metric: args.metric,
        mode: args.mode,
        mean_normalize: args.mean_normalize,
    };
    let result = run_segmenter(&ds, &segmenter)?;
    let names = ds.names();

    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    save_labels(&args.out.join("labels.csv"), &result.labeling)?;
    let mut runs_csv = String::from("class,name,start,end\n");
    for r in &result.runs {
        let _ = writeln!(
            runs_csv,
            "{},{},{},{}",
            r.class, names[r.class], r.start, r.end
        );
    }
    let runs_path = args.out.join("segments.csv");
    fs::write(&runs_path, runs_csv).map_err(|e| CliError::io(&runs_path, e))?;
    let svg_path = args.out.join("segments.svg");
    fs::write(&svg_path, svg::render(&ds.full, &result.labeling, &names))
        .map_err(|e| CliError::io(&svg_path, e))?;

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "metric {} / mode {}: T = {}, M = {}",
        args.metric,
        args.mode,
        ds.full.len(),
        names.len()
    );
    for (i, name) in names.iter().enumerate() {
        let start = result.starts[i].map_or("-".to_string(), |s| s.to_string());
        let runs: Vec<String> = result
            .runs
            .iter()
            .filter(|r| r.class == i)
            .map(|r| format!("[{}, {})", r.start, r.end))
            .collect();
        let _ = writeln!(summary, "  {name}: start {start}, runs {}", runs.join(" "));
    }
    let acc = match &ds.truth {
        Some(truth) => {
            let a = accuracy(&result.labeling, truth)?;
            let _ = writeln!(summary, "  overall accuracy {:.2}%", 100.0 * a.overall);
            Some(a)
        }
        None => None,
    };
    let _ = writeln!(summary, "wrote {}", args.out.display());
    Ok(SegmentOutput {
        result,
        accuracy: acc,
        summary,
    })
}

#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub manifest: PathBuf,
    pub metrics: Vec<MetricKind>,
    pub mode: AssignMode,
    pub pre: Preprocessing,
    pub mean_normalize: bool,
    /// Evaluate this label file instead of running the segmenter.
    pub pred: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct EvalRow {
    pub smoothing: &'static str,
    pub metric: String,
    pub accuracy: Accuracy,
}

fn pct(v: Option<f64>) -> String {
    v.map_or("n/a".to_string(), |v| format!("{:.2}%", 100.0 * v))
}

/// Accuracy table: one row per (preprocessing, metric), one column per class,
/// then the overall accuracy.
pub fn format_table(names: &[String], rows: &[EvalRow]) -> String {
    let mut header = vec!["Smoothing".to_string(), "Metric".to_string()];
    header.extend(
        names
            .iter()
            .enumerate()
            .map(|(i, n)| format!("Class {} ({n})", i + 1)),
    );
    header.push("Overall Accuracy".to_string());
    let mut cells: Vec<Vec<String>> = vec![header];
    for r in rows {
        let mut line = vec![r.smoothing.to_string(), r.metric.clone()];
        line.extend(r.accuracy.per_class.iter().map(|&v| pct(v)));
        line.push(pct(Some(r.accuracy.overall)));
        cells.push(line);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| {
            cells
                .iter()
                .map(|l| l[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (i, line) in cells.iter().enumerate() {
        let padded: Vec<String> = line
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (s, &w))| {
                if c < 2 {
                    format!("{s:<w$}")
                } else {
                    format!("{s:>w$}")
                }
            })
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        if i == 0 {
            let _ = writeln!(
                out,
                "{}",
                "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1))
            );
        }
    }
    out
}

pub fn eval(args: &EvalArgs) -> CliResult<(Vec<EvalRow>, String)> {
    let raw = load_dataset(&args.manifest)?;
    let names = raw.names();
    if raw.truth.is_none() {
        return Err(CliError::Input(format!(
            "{}: eval needs a `labels` entry with ground truth",
            args.manifest.display()
        )));
    }
    let mut rows = Vec::new();
    if let Some(pred_path) = &args.pred {
        let ds = args.pre.apply(&raw)?;
        let truth = ds.truth.as_ref().expect("checked above");
        let pred = load_labels(pred_path, names.len())?;
        rows.push(EvalRow {
            smoothing: if args.pre.is_identity() {
                "Raw"
            } else {
                "Smoothed"
            },
            metric: pred_path.display().to_string(),
            accuracy: accuracy(&pred, truth)?,
        });
    } else {
        let metrics = if args.metrics.is_empty() {
            MetricKind::ALL.to_vec()
        } else {
            args.metrics.clone()
        };
        let mut variants = vec![("Raw", raw.clone())];
        if !args.pre.is_identity() {
            variants.push(("Smoothed", args.pre.apply(&raw)?));
        }
        for (label, ds) in &variants {
            let truth = ds.truth.as_ref().expect("checked above");
            for &metric in &metrics {
                let segmenter = Segmenter {
                    metric,
                    mode: args.mode,
                    mean_normalize: args.mean_normalize,
                };
                let result = run_segmenter(ds, &segmenter)?;
                rows.push(EvalRow {
                    smoothing: label,
                    metric: metric.name().to_uppercase(),
                    accuracy: accuracy(&result.labeling, truth)?,
                });
            }
        }
    }
    let table = format_table(&names, &rows);
    Ok((rows, table))
}

#[derive(Debug, Clone)]
pub struct GenArgs {
    pub out: PathBuf,
    pub spec: CorpusSpec,
}

/// Writes a generated corpus: `corpus.toml` (the spec), `manifest.toml`,
/// `full.csv`, `truth.csv` and one `sub_<i>.csv` per sub-task.
pub fn gen(args: &GenArgs) -> CliResult<PathBuf> {
    let corpus = synth::generate(&args.spec)?;
    let out = &args.out;
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    save_trajectory(&out.join("full.csv"), &corpus.full)?;
    save_labels(&out.join("truth.csv"), &corpus.truth)?;
    let mut subtasks = Vec::new();
    for (i, e) in corpus.library.entries().iter().enumerate() {
        let file = format!("sub_{i}.csv");
        save_trajectory(&out.join(&file), &e.demo)?;
        subtasks.push(SubTaskEntry {
            name: e.name.clone(),
            path: file.into(),
        });
    }
    let manifest = DatasetManifest {
        full: "full.csv".into(),
        labels: Some("truth.csv".into()),
        dim: Some(args.spec.dim),
        notes: Some(format!("synthetic corpus, seed {}", args.spec.seed)),
        subtasks,
    };
    let manifest_path = out.join("manifest.toml");
    fs::write(&manifest_path, manifest.to_toml()).map_err(|e| CliError::io(&manifest_path, e))?;
    let spec_path = out.join("corpus.toml");
    let spec_text = toml::to_string(&args.spec).map_err(|e| CliError::Internal(e.to_string()))?;
    fs::write(&spec_path, spec_text).map_err(|e| CliError::io(&spec_path, e))?;
    Ok(manifest_path)
}

pub fn load_corpus_spec(path: &Path) -> CliResult<CorpusSpec> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn smooth(input: &Path, output: &Path, pre: &Preprocessing) -> CliResult<Trajectory> {
    if pre.is_identity() {
        return Err(CliError::Input(
            "smooth needs --smooth-window/--smooth-polyorder and/or --resample".into(),
        ));
    }
    let traj = pre.apply_trajectory(&load_trajectory(input)?)?;
    save_trajectory(output, &traj)?;
    Ok(traj)
}

pub fn bench(cfg: &BenchConfig) -> CliResult<String> {
    Ok(bench::run(cfg)?.to_string())
}
