//! End-to-end segmentation: profiles, Q matrix, assignment.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::assign::{assign_dense, assign_greedy_gaps_with_starts, predicted_start};
use crate::correlate::{build_q, mean_normalized, similarity_profile_fast};
use crate::error::{Error, Result};
use crate::metrics::MetricKind;
use crate::par;
use crate::types::{QMatrix, SegmentationResult, SimilarityProfile, SubTaskLibrary, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignMode {
    /// Every point gets the row-wise best sub-task.
    Dense,
    /// Greedy placement, one run per sub-task, unclaimed points stay unlabeled.
    Gaps,
}

impl AssignMode {
    pub fn name(self) -> &'static str {
        match self {
            AssignMode::Dense => "dense",
            AssignMode::Gaps => "gaps",
        }
    }
}

impl fmt::Display for AssignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AssignMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dense" => Ok(AssignMode::Dense),
            "gaps" => Ok(AssignMode::Gaps),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode {other:?}, expected dense or gaps"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segmenter {
    pub metric: MetricKind,
    pub mode: AssignMode,
    /// Divide window scores by their number of terms. Off by default.
    pub mean_normalize: bool,
}

impl Segmenter {
    pub fn new(metric: MetricKind, mode: AssignMode) -> Self {
        Self {
            metric,
            mode,
            mean_normalize: false,
        }
    }

    /// One profile per library entry, computed in parallel over sub-tasks.
    pub fn profiles(
        &self,
        library: &SubTaskLibrary,
        full: &Trajectory,
    ) -> Result<Vec<SimilarityProfile>> {
        let entries = library.entries();
        par::map_indexed(entries.len(), |i| {
            let demo = &entries[i].demo;
            let profile = similarity_profile_fast(self.metric, demo, full)?.with_subtask(i);
            if self.mean_normalize {
                mean_normalized(&profile, self.metric, demo.len())
            } else {
                Ok(profile)
            }
        })
        .into_iter()
        .collect()
    }

    pub fn q_matrix(&self, library: &SubTaskLibrary, full: &Trajectory) -> Result<QMatrix> {
        let profiles = self.profiles(library, full)?;
        build_q(&profiles, &library.lengths(), full.len())
    }

    pub fn segment(
        &self,
        library: &SubTaskLibrary,
        full: &Trajectory,
    ) -> Result<SegmentationResult> {
        let profiles = self.profiles(library, full)?;
        let lengths = library.lengths();
        let q = build_q(&profiles, &lengths, full.len())?;
        let predicted = profiles.iter().map(|p| Some(predicted_start(p)));
        let (labeling, starts) = match self.mode {
            AssignMode::Dense => (assign_dense(&q)?, predicted.collect()),
            AssignMode::Gaps => {
                let (labeling, placed) = assign_greedy_gaps_with_starts(&q, &lengths)?;
                // Sub-tasks the greedy pass never placed report no start.
                let starts = predicted
                    .zip(placed)
                    .map(|(p, placed)| placed.and(p))
                    .collect();
                (labeling, starts)
            }
        };
        SegmentationResult::new(labeling, starts, &lengths)
    }
}
