use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrseg_cli::bench::BenchConfig;
use corrseg_cli::commands::{self, EvalArgs, GenArgs, Preprocessing, SegmentArgs};
use corrseg_cli::{configure_threads, parse_threads, CliResult, THREADS_ENV};
use corrseg_core::synth::CorpusSpec;
use corrseg_core::{AssignMode, MetricKind};

#[derive(Parser)]
#[command(
    name = "corrseg",
    version,
    about = "Segment demonstration trajectories by similarity cross-correlation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct PreprocessFlags {
    /// Savitzky-Golay window (odd); requires --smooth-polyorder.
    #[arg(long)]
    smooth_window: Option<usize>,
    /// Savitzky-Golay polynomial order; requires --smooth-window.
    #[arg(long)]
    smooth_polyorder: Option<usize>,
    /// Resample the full task to N points (sub-tasks by the same ratio).
    #[arg(long, value_name = "N")]
    resample: Option<usize>,
}

impl PreprocessFlags {
    fn build(&self) -> CliResult<Preprocessing> {
        Preprocessing::from_flags(self.smooth_window, self.smooth_polyorder, self.resample)
    }
}

fn parse_metric(s: &str) -> Result<MetricKind, String> {
    s.parse().map_err(|e: corrseg_core::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<AssignMode, String> {
    s.parse().map_err(|e: corrseg_core::Error| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Segment the full task of a dataset manifest.
    Segment {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "sse", value_parser = parse_metric)]
        metric: MetricKind,
        #[arg(long, default_value = "dense", value_parser = parse_mode)]
        mode: AssignMode,
        #[command(flatten)]
        pre: PreprocessFlags,
        /// Divide window scores by their number of terms.
        #[arg(long)]
        mean_normalize: bool,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Accuracy table against the manifest's ground truth.
    Eval {
        #[arg(long)]
        manifest: PathBuf,
        /// Metrics to run (repeatable); all three by default.
        #[arg(long, value_parser = parse_metric)]
        metric: Vec<MetricKind>,
        #[arg(long, default_value = "dense", value_parser = parse_mode)]
        mode: AssignMode,
        #[command(flatten)]
        pre: PreprocessFlags,
        #[arg(long)]
        mean_normalize: bool,
        /// Score an existing label file instead of segmenting.
        #[arg(long)]
        pred: Option<PathBuf>,
    },
    /// Generate a synthetic corpus with ground truth.
    Gen {
        #[arg(long, default_value = "corpus")]
        out: PathBuf,
        /// Full corpus spec (TOML); overrides the shape flags below.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        subtasks: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Gap lengths between consecutive sub-tasks, comma separated.
        #[arg(long, value_delimiter = ',')]
        gaps: Vec<usize>,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Translation of every library demo, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        translate: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 1.0)]
        tempo: f64,
    },
    /// Smooth and/or resample a single trajectory file.
    Smooth {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        pre: PreprocessFlags,
    },
    /// Time the pipeline over growing T and M.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [2000usize, 4000, 8000, 16000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        subtasks: usize,
        /// Sub-task counts for the M sweep, run at the first size.
        #[arg(long, value_delimiter = ',', default_values_t = [5usize, 10, 20])]
        subtask_sizes: Vec<usize>,
        #[arg(long, default_value_t = 400)]
        sub_len: usize,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value = "sse", value_parser = parse_metric)]
        metric: MetricKind,
        #[arg(long, default_value = "dense", value_parser = parse_mode)]
        mode: AssignMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads(parse_threads(std::env::var(THREADS_ENV).ok().as_deref())?)?;
    match cli.command {
        Command::Segment {
            manifest,
            metric,
            mode,
            pre,
            mean_normalize,
            out,
        } => {
            let out = commands::segment(&SegmentArgs {
                manifest,
                metric,
                mode,
                pre: pre.build()?,
                mean_normalize,
                out,
            })?;
            print!("{}", out.summary);
        }
        Command::Eval {
            manifest,
            metric,
            mode,
            pre,
            mean_normalize,
            pred,
        } => {
            let (_, table) = commands::eval(&EvalArgs {
                manifest,
                metrics: metric,
                mode,
                pre: pre.build()?,
                mean_normalize,
                pred,
            })?;
            print!("{table}");
        }
        Command::Gen {
            out,
            spec,
            seed,
            subtasks,
            dim,
            gaps,
            noise,
            translate,
            scale,
            tempo,
        } => {
            let spec = match spec {
                Some(path) => commands::load_corpus_spec(&path)?,
                None => {
                    let mut spec = CorpusSpec::standard(seed, subtasks, dim)
                        .with_gaps(gaps)
                        .with_noise(noise);
                    for s in &mut spec.subtasks {
                        s.perturbation.translation = translate.clone();
                        s.perturbation.scale = scale;
                        s.perturbation.tempo = tempo;
                    }
                    spec
                }
            };
            let manifest = commands::gen(&GenArgs { out, spec })?;
            println!("wrote {}", manifest.display());
        }
        Command::Smooth { input, output, pre } => {
            let traj = commands::smooth(&input, &output, &pre.build()?)?;
            println!("wrote {} ({} points)", output.display(), traj.len());
        }
        Command::Bench {
            sizes,
            subtasks,
            subtask_sizes,
            sub_len,
            dim,
            runs,
            metric,
            mode,
            seed,
        } => {
            let report = commands::bench(&BenchConfig {
                sizes,
                subtasks,
                sub_len,
                dim,
                runs,
                subtask_sizes,
                metric,
                mode,
                seed,
            })?;
            print!("{report}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("corrseg: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
