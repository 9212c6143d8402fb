//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Run with `cargo test -p corrseg-cli --test acceptance`.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use corrseg_cli::bench::{self, BenchConfig};
use corrseg_cli::io::{labels_to_bytes, save_labels};
use corrseg_core::correlate::{build_q, similarity_profile_fast, similarity_profile_naive};
use corrseg_core::eval::accuracy;
use corrseg_core::preprocess::{savgol_smooth, SavGolConfig};
use corrseg_core::synth::{generate, Corpus, CorpusSpec};
use corrseg_core::{
    AssignMode, Labeling, MetricKind, Segmenter, SimilarityProfile, Trajectory, UNLABELED,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

fn base_corpus() -> Corpus {
    generate(&CorpusSpec::standard(42, 3, 2)).expect("standard corpus")
}

fn gapped_corpus() -> Corpus {
    generate(&CorpusSpec::standard(42, 3, 2).with_gaps(vec![50, 50])).expect("gapped corpus")
}

fn transformed(full: &Trajectory) -> Trajectory {
    let shift = [10.0, -5.0];
    full.map(|c, v| 2.0 * (v + shift[c]))
        .expect("finite transform")
}

fn labels(corpus: &Corpus, full: &Trajectory, metric: MetricKind, mode: AssignMode) -> Labeling {
    Segmenter::new(metric, mode)
        .segment(&corpus.library, full)
        .expect("segmentation")
        .labeling
}

fn exact_slice_recovery() -> Outcome {
    let start = Instant::now();
    let corpus = base_corpus();
    let pred = labels(&corpus, &corpus.full, MetricKind::Sse, AssignMode::Dense);
    let elapsed = start.elapsed().as_secs_f64();
    let acc = accuracy(&pred, &corpus.truth).map_err(|e| e.to_string())?;
    ensure!(acc.overall == 1.0, "overall accuracy {:.4}", acc.overall);
    ensure!(elapsed < 1.0, "runtime {elapsed:.3} s");
    Ok(format!(
        "accuracy 100%, T = {}, {elapsed:.3} s",
        corpus.full.len()
    ))
}

fn gaps_mode_fidelity() -> Outcome {
    let corpus = gapped_corpus();
    let pred = labels(&corpus, &corpus.full, MetricKind::Sse, AssignMode::Gaps);
    let lengths = corpus.library.lengths();
    for run in corpus.truth.runs() {
        let got = &pred.classes()[run.start..run.end];
        ensure!(
            got.iter().all(|&c| c == run.class as i32),
            "truth run of class {} at [{}, {}) not fully labeled",
            run.class,
            run.start,
            run.end
        );
    }
    let gap_points = corpus
        .truth
        .classes()
        .iter()
        .filter(|&&c| c == UNLABELED)
        .count();
    for (k, (&t, &p)) in corpus
        .truth
        .classes()
        .iter()
        .zip(pred.classes())
        .enumerate()
    {
        ensure!(
            t != UNLABELED || p == UNLABELED,
            "gap point {k} labeled {p}"
        );
    }
    let runs = pred.runs();
    for run in &runs {
        ensure!(
            run.len() <= lengths[run.class],
            "class {} run of {} exceeds t = {}",
            run.class,
            run.len(),
            lengths[run.class]
        );
    }
    for class in 0..lengths.len() {
        let n = runs.iter().filter(|r| r.class == class).count();
        ensure!(n <= 1, "class {class} claimed {n} separate runs");
    }
    Ok(format!(
        "{} runs recovered, {gap_points} gap points unlabeled",
        runs.len()
    ))
}

fn cos_invariance() -> Outcome {
    let corpus = base_corpus();
    let moved = transformed(&corpus.full);
    let before = labels_to_bytes(&labels(
        &corpus,
        &corpus.full,
        MetricKind::Cos,
        AssignMode::Dense,
    ));
    let after = labels_to_bytes(&labels(&corpus, &moved, MetricKind::Cos, AssignMode::Dense));
    ensure!(
        before == after,
        "COS labels differ after translate and scale"
    );
    let demo = &corpus.library.entries()[0].demo;
    let ccs_before =
        similarity_profile_fast(MetricKind::Ccs, demo, &corpus.full).map_err(|e| e.to_string())?;
    let ccs_after =
        similarity_profile_fast(MetricKind::Ccs, demo, &moved).map_err(|e| e.to_string())?;
    ensure!(
        ccs_before.values() != ccs_after.values(),
        "CCS profile unchanged"
    );
    let shift = ccs_before
        .values()
        .iter()
        .zip(ccs_after.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(format!(
        "COS labels bit-identical; CCS profile moved by up to {shift:.1}"
    ))
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
    Trajectory::from_flat(data, dim).expect("valid walk")
}

/// Direct evaluation of one window score, independent of the library.
fn window_score(metric: MetricKind, sub: &Trajectory, full: &Trajectory, j: usize) -> f64 {
    let t = sub.len();
    match metric {
        MetricKind::Ccs => (0..t)
            .map(|k| {
                sub.point(k)
                    .iter()
                    .zip(full.point(j + k))
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            })
            .sum(),
        MetricKind::Sse => -(0..t)
            .map(|k| {
                sub.point(k)
                    .iter()
                    .zip(full.point(j + k))
                    .map(|(a, b)| (b - a) * (b - a))
                    .sum::<f64>()
            })
            .sum::<f64>(),
        MetricKind::Cos => (0..t - 1)
            .map(|k| {
                let u: Vec<f64> = (0..sub.dim())
                    .map(|c| sub.point(k + 1)[c] - sub.point(k)[c])
                    .collect();
                let v: Vec<f64> = (0..sub.dim())
                    .map(|c| full.point(j + k + 1)[c] - full.point(j + k)[c])
                    .collect();
                let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if nu < 1e-12 || nv < 1e-12 {
                    0.0
                } else {
                    u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / (nu * nv)
                }
            })
            .sum(),
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    if got == want {
        0.0
    } else {
        (got - want).abs() / want.abs()
    }
}

fn oracle_equivalence() -> Outcome {
    let mut worst = [0.0f64; 3];
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rng.random_range(1..=4);
        let total = rng.random_range(80..=500);
        let full = random_walk(&mut rng, total, dim);
        let m = rng.random_range(1..=3);
        let subs: Vec<Trajectory> = (0..m)
            .map(|_| {
                let t = rng.random_range(2..=80);
                random_walk(&mut rng, t, dim)
            })
            .collect();
        for (mi, metric) in MetricKind::ALL.into_iter().enumerate() {
            let mut profiles = Vec::with_capacity(m);
            for sub in &subs {
                let fast =
                    similarity_profile_fast(metric, sub, &full).map_err(|e| e.to_string())?;
                let naive =
                    similarity_profile_naive(metric, sub, &full).map_err(|e| e.to_string())?;
                ensure!(
                    fast.len() == total - sub.len() + 1,
                    "seed {seed}: profile length {}",
                    fast.len()
                );
                for (j, (&f, &n)) in fast.values().iter().zip(naive.values()).enumerate() {
                    let direct = window_score(metric, sub, &full, j);
                    worst[mi] = worst[mi].max(rel_err(f, n));
                    ensure!(
                        rel_err(f, n) < 1e-9,
                        "seed {seed} {metric} offset {j}: fast {f} vs naive {n}"
                    );
                    ensure!(
                        rel_err(n, direct) < 1e-9,
                        "seed {seed} {metric} offset {j}: naive {n} vs direct {direct}"
                    );
                }
                profiles.push(fast);
            }
            let lengths: Vec<usize> = subs.iter().map(Trajectory::len).collect();
            let q = build_q(&profiles, &lengths, total).map_err(|e| e.to_string())?;
            ensure!(
                nested_q_matches(&profiles, &lengths, total, |k, i| q.get(k, i)),
                "seed {seed} {metric}: sliding maximum differs from nested loops"
            );
        }
    }
    Ok(format!(
        "max rel err ccs {:.1e}, sse {:.1e}, cos {:.1e}; Q exact",
        worst[0], worst[1], worst[2]
    ))
}

fn nested_q_matches(
    profiles: &[SimilarityProfile],
    lengths: &[usize],
    total: usize,
    q: impl Fn(usize, usize) -> f64,
) -> bool {
    for (i, p) in profiles.iter().enumerate() {
        let mut col = vec![f64::NEG_INFINITY; total];
        for (j, &v) in p.values().iter().enumerate() {
            for cell in &mut col[j..j + lengths[i]] {
                if v > *cell {
                    *cell = v;
                }
            }
        }
        if (0..total).any(|k| q(k, i).to_bits() != col[k].to_bits()) {
            return false;
        }
    }
    true
}

fn savgol_correctness() -> Outcome {
    let cfg = SavGolConfig::new(31, 2).map_err(|e| e.to_string())?;
    let n = 200;
    let data: Vec<f64> = (0..n)
        .flat_map(|k| {
            let x = k as f64 * 0.05;
            [3.0 * x * x - x + 2.0, -0.5 * x * x + 4.0 * x - 1.0]
        })
        .collect();
    let traj = Trajectory::from_flat(data, 2).map_err(|e| e.to_string())?;
    let smoothed = savgol_smooth(&traj, &cfg).map_err(|e| e.to_string())?;
    let half = 15;
    let interior = (half..n - half)
        .flat_map(|k| (0..2).map(move |c| (k, c)))
        .map(|(k, c)| (smoothed.point(k)[c] - traj.point(k)[c]).abs())
        .fold(0.0, f64::max);
    ensure!(interior < 1e-8, "interior error {interior:e}");

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_lin = 0.0f64;
    for _ in 0..50 {
        let len = rng.random_range(31..=120);
        let x = random_walk(&mut rng, len, 2);
        let y = random_walk(&mut rng, len, 2);
        let (a, b): (f64, f64) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let combo = Trajectory::from_flat(
            x.as_flat()
                .iter()
                .zip(y.as_flat())
                .map(|(p, q)| a * p + b * q)
                .collect(),
            2,
        )
        .map_err(|e| e.to_string())?;
        let lhs = savgol_smooth(&combo, &cfg).map_err(|e| e.to_string())?;
        let sx = savgol_smooth(&x, &cfg).map_err(|e| e.to_string())?;
        let sy = savgol_smooth(&y, &cfg).map_err(|e| e.to_string())?;
        for ((l, p), q) in lhs.as_flat().iter().zip(sx.as_flat()).zip(sy.as_flat()) {
            worst_lin = worst_lin.max((l - (a * p + b * q)).abs());
        }
    }
    ensure!(worst_lin < 1e-9, "linearity error {worst_lin:e}");
    Ok(format!(
        "interior {interior:.1e}, linearity {worst_lin:.1e}"
    ))
}

fn complexity_scaling() -> Outcome {
    let start = Instant::now();
    let report = bench::run(&BenchConfig::default()).map_err(|e| e.to_string())?;
    let total = start.elapsed().as_secs_f64();
    print!("{report}");
    let len_ratios = report.len_ratios();
    let sub_ratios = report.subtask_ratios();
    for (i, r) in len_ratios.iter().enumerate() {
        ensure!(
            *r <= 2.5,
            "T {} -> {}: ratio {r:.3}",
            report.by_len[i].len,
            report.by_len[i + 1].len
        );
    }
    for (i, r) in sub_ratios.iter().enumerate() {
        ensure!(
            *r <= 2.5,
            "M {} -> {}: ratio {r:.3}",
            report.by_subtasks[i].subtasks,
            report.by_subtasks[i + 1].subtasks
        );
    }
    ensure!(total < 60.0, "bench took {total:.1} s");
    let fmt = |v: &[f64]| {
        v.iter()
            .map(|r| format!("{r:.2}"))
            .collect::<Vec<_>>()
            .join("/")
    };
    Ok(format!(
        "T ratios {}, M ratios {}, {total:.1} s total",
        fmt(&len_ratios),
        fmt(&sub_ratios)
    ))
}

fn metric_ordering() -> Outcome {
    let seed = 42;
    let base = CorpusSpec::standard(seed, 3, 2);
    let probe = generate(&base).map_err(|e| e.to_string())?;
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    for p in probe.full.points() {
        for c in 0..2 {
            lo[c] = lo[c].min(p[c]);
            hi[c] = hi[c].max(p[c]);
        }
    }
    let extent = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
    let mut spec = base;
    let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
    for s in &mut spec.subtasks {
        let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        s.perturbation.translation = vec![0.2 * extent * angle.cos(), 0.2 * extent * angle.sin()];
    }
    let corpus = generate(&spec).map_err(|e| e.to_string())?;
    let acc = |metric| {
        let pred = labels(&corpus, &corpus.full, metric, AssignMode::Dense);
        accuracy(&pred, &corpus.truth).expect("same length").overall
    };
    let (ccs, sse, cos) = (
        acc(MetricKind::Ccs),
        acc(MetricKind::Sse),
        acc(MetricKind::Cos),
    );
    let line = format!(
        "CCS {:.2}%, COS {:.2}%, SSE {:.2}%",
        100.0 * ccs,
        100.0 * cos,
        100.0 * sse
    );
    ensure!(ccs < cos && ccs < sse, "ordering violated: {line}");
    Ok(line)
}

#[cfg(feature = "parallel")]
fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}

#[cfg(not(feature = "parallel"))]
fn in_pool<T: Send>(_threads: usize, f: impl FnOnce() -> T + Send) -> T {
    f()
}

fn worker_determinism() -> Outcome {
    let base = base_corpus();
    let gapped = gapped_corpus();
    let moved = transformed(&base.full);
    let cases: [(&str, &Corpus, &Trajectory, MetricKind, AssignMode); 4] = [
        (
            "exact",
            &base,
            &base.full,
            MetricKind::Sse,
            AssignMode::Dense,
        ),
        (
            "gaps",
            &gapped,
            &gapped.full,
            MetricKind::Sse,
            AssignMode::Gaps,
        ),
        ("cos", &base, &base.full, MetricKind::Cos, AssignMode::Dense),
        (
            "cos-moved",
            &base,
            &moved,
            MetricKind::Cos,
            AssignMode::Dense,
        ),
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (name, corpus, full, metric, mode) in cases {
        let mut files = Vec::new();
        for threads in [1, 8] {
            let pred = in_pool(threads, || labels(corpus, full, metric, mode));
            let path = dir.path().join(format!("{name}_{threads}.csv"));
            save_labels(&path, &pred).map_err(|e| e.to_string())?;
            files.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure!(
            files[0] == files[1],
            "{name}: label files differ between 1 and 8 workers"
        );
    }
    Ok("4 label files byte-identical across 1 and 8 workers".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 exact-slice recovery", exact_slice_recovery),
        ("2 gaps-mode fidelity", gaps_mode_fidelity),
        ("3 COS invariance", cos_invariance),
        ("4 oracle equivalence", oracle_equivalence),
        ("5 Savitzky-Golay correctness", savgol_correctness),
        ("6 complexity scaling", complexity_scaling),
        ("7 metric ordering", metric_ordering),
        ("8 worker-count determinism", worker_determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
