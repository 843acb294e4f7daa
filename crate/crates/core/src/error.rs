use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("no data rows")]
    NoData,

    #[error("row {row}: expected {expected} columns, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {col}: cannot parse {value:?} as a number")]
    NonNumeric { row: usize, col: usize, value: String },

    #[error("row {row}: negative label {value}")]
    NegativeLabel { row: usize, value: i64 },

    #[error("row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("{op}: shape mismatch, expected {expected}, found {found}")]
    Shape {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("label {label} at position {index} out of range for {classes} classes")]
    LabelOutOfRange {
        index: usize,
        label: usize,
        classes: usize,
    },

    #[error("class {class} has no samples")]
    EmptyClass { class: usize },

    #[error("class {class}: requested {requested} samples but only {available} available")]
    InsufficientSamples {
        class: usize,
        requested: usize,
        available: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("input matrix has zero rows")]
    EmptyMatrix,

    #[error("matrix has zero variance")]
    ZeroVariance,

    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("point is not on the manifold (constraint residual {residual:e})")]
    Infeasible { residual: f64 },

    #[error("retraction collapsed: column {column} is numerically dependent")]
    RankDeficient { column: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("score matrix TᵀT is singular; retry with at most {usable} components")]
    SingularScores { usable: usize },

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape_err(
    op: &'static str,
    expected: impl std::fmt::Display,
    found: impl std::fmt::Display,
) -> Error {
    Error::Shape {
        op,
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
