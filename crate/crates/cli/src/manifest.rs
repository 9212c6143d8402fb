//! Dataset manifests.
//!
//! A manifest is a TOML file naming the full-task trajectory, the sub-task
//! demonstrations with their class names, and optionally a ground-truth label
//! file. Relative paths resolve against the manifest's directory.
//!
//! ```toml
//! full = "full.csv"
//! labels = "truth.csv"
//! dim = 2
//! notes = "generated corpus, seed 42"
//!
//! [[subtasks]]
//! name = "loop_0"
//! path = "sub_0.csv"
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use corrseg_core::{Labeling, SubTask, SubTaskLibrary, Trajectory};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io::{load_labels, load_trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubTaskEntry {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub full: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub subtasks: Vec<SubTaskEntry>,
}

/// A manifest with every referenced file loaded and cross-checked.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub full: Trajectory,
    pub library: SubTaskLibrary,
    pub truth: Option<Labeling>,
}

impl Dataset {
    pub fn names(&self) -> Vec<String> {
        self.library.names().map(str::to_owned).collect()
    }
}

impl DatasetManifest {
    pub fn from_toml(text: &str, source: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("{source}: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }

    /// Loads every file, resolving relative paths against `base`.
    pub fn resolve(&self, base: &Path) -> CliResult<Dataset> {
        let at = |p: &Path| base.join(p);
        let full = load_trajectory(&at(&self.full))?;
        let mut entries = Vec::with_capacity(self.subtasks.len());
        for entry in &self.subtasks {
            let path = at(&entry.path);
            let demo = load_trajectory(&path)?;
            if demo.dim() != full.dim() {
                return Err(CliError::Input(format!(
                    "{}: dimension {} differs from the full task's {}",
                    path.display(),
                    demo.dim(),
                    full.dim()
                )));
            }
            if demo.len() > full.len() {
                return Err(CliError::Input(format!(
                    "{}: sub-task has {} points, longer than the full task's {}",
                    path.display(),
                    demo.len(),
                    full.len()
                )));
            }
            entries.push(SubTask {
                name: entry.name.clone(),
                demo,
            });
        }
        if let Some(d) = self.dim {
            if d != full.dim() {
                return Err(CliError::Input(format!(
                    "manifest declares dim = {d} but the data has {} columns",
                    full.dim()
                )));
            }
        }
        let library = SubTaskLibrary::new(entries)?;
        let truth = match &self.labels {
            Some(p) => {
                let path = at(p);
                let labels = load_labels(&path, library.len())?;
                if labels.len() != full.len() {
                    return Err(CliError::Input(format!(
                        "{}: {} labels for a full task of {} points",
                        path.display(),
                        labels.len(),
                        full.len()
                    )));
                }
                Some(labels)
            }
            None => None,
        };
        Ok(Dataset {
            full,
            library,
            truth,
        })
    }
}

/// Reads a manifest file and everything it references.
pub fn load_dataset(path: &Path) -> CliResult<Dataset> {
    let manifest = DatasetManifest::load(path)?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    manifest.resolve(base)
}
