//! Domain types shared by every stage of the pipeline.
//!
//! All types validate their invariants on construction and are immutable
//! afterwards, so they can be shared read-only between worker threads.

use std::collections::HashSet;
use std::ops::Range;

use crate::error::{Error, Result};

/// Label value for points that belong to no sub-task.
pub const UNLABELED: i32 = -1;

/// Sentinel stored in the Q matrix for "no similarity recorded".
///
/// Profiles are required to be finite, so this value never collides with a
/// real similarity and compares below all of them.
pub const SENTINEL: f64 = f64::NEG_INFINITY;

/// A `T × d` trajectory sampled on a uniform time index `0..T`.
///
/// Points are stored row-major in one contiguous buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    data: Vec<f64>,
    len: usize,
    dim: usize,
}

impl Trajectory {
    /// Builds a trajectory from a flat row-major buffer of `data.len() / dim` points.
    pub fn from_flat(data: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::Ragged {
                row: data.len() / dim,
                expected: dim,
                found: data.len() % dim,
            });
        }
        let len = data.len() / dim;
        if len < 2 {
            return Err(Error::TooShort(len));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self { data, len, dim })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TooShort(rows.len()));
        }
        let dim = rows[0].as_ref().len();
        let mut data = Vec::with_capacity(rows.len() * dim);
        for (row, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::Ragged {
                    row,
                    expected: dim,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_flat(data, dim)
    }

    /// Number of time steps `T`.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.data[index * self.dim..(index + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Values of one coordinate over time.
    pub fn column(&self, col: usize) -> Vec<f64> {
        self.points().map(|p| p[col]).collect()
    }

    /// Points `range` as a new trajectory.
    pub fn slice(&self, range: Range<usize>) -> Result<Self> {
        if range.end > self.len || range.start > range.end {
            return Err(Error::LengthMismatch {
                expected: self.len,
                found: range.end,
            });
        }
        Self::from_flat(
            self.data[range.start * self.dim..range.end * self.dim].to_vec(),
            self.dim,
        )
    }

    /// Applies `f` to every coordinate, keeping the shape.
    pub fn map(&self, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let dim = self.dim;
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(i, &v)| f(i % dim, v))
            .collect();
        Self::from_flat(data, dim)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubTask {
    pub name: String,
    pub demo: Trajectory,
}

/// Ordered set of named sub-task demonstrations sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SubTaskLibrary {
    entries: Vec<SubTask>,
}

impl SubTaskLibrary {
    pub fn new(entries: Vec<SubTask>) -> Result<Self> {
        let first = entries.first().ok_or(Error::EmptyLibrary)?;
        let dim = first.demo.dim();
        let mut seen = HashSet::new();
        for entry in &entries {
            if entry.name.is_empty() {
                return Err(Error::EmptyName);
            }
            if !seen.insert(entry.name.as_str()) {
                return Err(Error::DuplicateName(entry.name.clone()));
            }
            if entry.demo.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: entry.demo.dim(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.entries[0].demo.dim()
    }

    pub fn entries(&self) -> &[SubTask] {
        &self.entries
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.name.as_str())
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.demo.len()).collect()
    }

    pub fn get(&self, index: usize) -> Option<&SubTask> {
        self.entries.get(index)
    }
}

/// Window similarities of one sub-task against the full task, indexed by offset.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityProfile {
    subtask: usize,
    values: Vec<f64>,
}

impl SimilarityProfile {
    pub fn new(subtask: usize, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: pos, col: 0 });
        }
        Ok(Self { subtask, values })
    }

    pub fn subtask(&self) -> usize {
        self.subtask
    }

    pub fn with_subtask(mut self, subtask: usize) -> Self {
        self.subtask = subtask;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `T × M` matrix holding, per time point and sub-task, the best similarity of
/// any window covering that point.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl QMatrix {
    /// All-sentinel matrix.
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            values: vec![SENTINEL; rows * cols],
        }
    }

    /// Builds a matrix from columns; every column must have the same length.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut q = Self::new(rows, cols);
        for (i, column) in columns.iter().enumerate() {
            if column.len() != rows {
                return Err(Error::ShapeMismatch(format!(
                    "column {i} has {} rows, expected {rows}",
                    column.len()
                )));
            }
            for (k, &v) in column.iter().enumerate() {
                if v.is_nan() || v == f64::INFINITY {
                    return Err(Error::NonFinite { row: k, col: i });
                }
                q.values[k * cols + i] = v;
            }
        }
        Ok(q)
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let columns: Vec<Vec<f64>> = (0..cols)
            .map(|i| {
                rows.iter()
                    .map(|r| r.as_ref().get(i).copied().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect();
        for (k, r) in rows.iter().enumerate() {
            if r.as_ref().len() != cols {
                return Err(Error::Ragged {
                    row: k,
                    expected: cols,
                    found: r.as_ref().len(),
                });
            }
        }
        Self::from_columns(&columns)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|k| self.get(k, col)).collect()
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: f64) {
        self.values[row * self.cols + col] = value;
    }

    pub(crate) fn clear_column(&mut self, col: usize) {
        for k in 0..self.rows {
            self.set(k, col, SENTINEL);
        }
    }

    pub(crate) fn clear_rows(&mut self, rows: Range<usize>) {
        self.values[rows.start * self.cols..rows.end * self.cols].fill(SENTINEL);
    }

    /// Largest entry, or the sentinel when the matrix is exhausted.
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(SENTINEL, f64::max)
    }
}

/// Per-point class assignment; [`UNLABELED`] marks gaps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Labeling {
    classes: Vec<i32>,
    num_classes: usize,
}

impl Labeling {
    pub fn new(classes: Vec<i32>, num_classes: usize) -> Result<Self> {
        for (index, &label) in classes.iter().enumerate() {
            if label < UNLABELED || (label >= 0 && label as usize >= num_classes) {
                return Err(Error::InvalidLabel {
                    index,
                    label,
                    classes: num_classes,
                });
            }
        }
        Ok(Self {
            classes,
            num_classes,
        })
    }

    pub fn unlabeled(len: usize, num_classes: usize) -> Self {
        Self {
            classes: vec![UNLABELED; len],
            num_classes,
        }
    }

    pub fn classes(&self) -> &[i32] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn runs(&self) -> Vec<Run> {
        runs_from_labeling(self)
    }
}

/// A maximal stretch `[start, end)` of points sharing one class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub class: usize,
    pub start: usize,
    pub end: usize,
}

impl Run {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// Run-length encodes a labeling, dropping gap runs.
pub fn runs_from_labeling(labeling: &Labeling) -> Vec<Run> {
    let mut runs = Vec::new();
    let classes = labeling.classes();
    let mut start = 0;
    while start < classes.len() {
        let label = classes[start];
        let end = classes[start..]
            .iter()
            .position(|&c| c != label)
            .map_or(classes.len(), |p| start + p);
        if label != UNLABELED {
            runs.push(Run {
                class: label as usize,
                start,
                end,
            });
        }
        start = end;
    }
    runs
}

/// Output of a full segmentation.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    pub labeling: Labeling,
    /// Most likely start offset per sub-task (first argmax of its profile);
    /// `None` for a sub-task that claimed no points in gap mode.
    pub starts: Vec<Option<usize>>,
    pub runs: Vec<Run>,
}

impl SegmentationResult {
    pub fn new(labeling: Labeling, starts: Vec<Option<usize>>, lengths: &[usize]) -> Result<Self> {
        if starts.len() != labeling.num_classes() || lengths.len() != starts.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} starts and {} lengths for {} classes",
                starts.len(),
                lengths.len(),
                labeling.num_classes()
            )));
        }
        let total = labeling.len();
        for (i, start) in starts.iter().enumerate() {
            if let Some(p) = *start {
                if lengths[i] > total || p > total - lengths[i] {
                    return Err(Error::OffsetOutOfRange {
                        offset: p,
                        max: total.saturating_sub(lengths[i]),
                    });
                }
            }
        }
        let runs = runs_from_labeling(&labeling);
        Ok(Self {
            labeling,
            starts,
            runs,
        })
    }
}
