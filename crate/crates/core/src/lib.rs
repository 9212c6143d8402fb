//! Segmentation of demonstration trajectories by similarity cross-correlation.
//!
//! Each sub-task demonstration is slid along the full-task trajectory and
//! scored at every offset with a pluggable similarity metric. The per-point
//! best scores form a `T × M` matrix from which every point is labeled,
//! either densely (row-wise argmax) or greedily with gaps allowed.
//!
//! ```
//! use corrseg_core::{synth, AssignMode, MetricKind, Segmenter};
//!
//! let corpus = synth::generate(&synth::CorpusSpec::standard(42, 3, 2)).unwrap();
//! let result = Segmenter::new(MetricKind::Sse, AssignMode::Dense)
//!     .segment(&corpus.library, &corpus.full)
//!     .unwrap();
//! assert_eq!(result.labeling, corpus.truth);
//! ```

pub mod assign;
pub mod correlate;
mod error;
pub mod eval;
pub mod metrics;
mod par;
pub mod preprocess;
pub mod segment;
pub mod synth;
pub mod types;

pub use error::{Error, Result};
pub use metrics::MetricKind;
pub use par::current_threads;
pub use segment::{AssignMode, Segmenter};
pub use types::{
    runs_from_labeling, Labeling, QMatrix, Run, SegmentationResult, SimilarityProfile, SubTask,
    SubTaskLibrary, Trajectory, SENTINEL, UNLABELED,
};
