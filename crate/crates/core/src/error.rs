use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("trajectory requires T ≥ 2, got {0}")]
    TooShort(usize),

    #[error("trajectory requires d ≥ 1")]
    ZeroDimension,

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("row {row} has {found} columns, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("sub-task of length {sub} is longer than the full task of length {full}")]
    SubtaskTooLong { sub: usize, full: usize },

    #[error("offset {offset} out of range, maximum is {max}")]
    OffsetOutOfRange { offset: usize, max: usize },

    #[error("sub-task library must contain at least one entry")]
    EmptyLibrary,

    #[error("sub-task name must be non-empty")]
    EmptyName,

    #[error("duplicate sub-task name {0:?}")]
    DuplicateName(String),

    #[error("label {label} at index {index} is outside [-1, {classes})")]
    InvalidLabel {
        index: usize,
        label: i32,
        classes: usize,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("Q matrix still holds the sentinel at row {row}, column {col}")]
    UnresolvedSentinel { row: usize, col: usize },

    #[error("similarity profile is empty")]
    EmptyProfile,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
