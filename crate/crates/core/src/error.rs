use std::path::PathBuf;

use thiserror::Error;

/// Broad failure category, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Compute,
    Analysis,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("missing split file {0}")]
    MissingSplit(PathBuf),

    #[error("{path}:{line}: expected 3 tab-separated fields, found {found}")]
    MalformedTriple { path: PathBuf, line: usize, found: usize },

    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("embedding for `{label}` has {found} values, table dimension is {expected}")]
    DimensionMismatch { label: String, expected: usize, found: usize },

    #[error("duplicate embedding label `{0}`")]
    DuplicateLabel(String),

    #[error("no embedding for label `{0}`")]
    MissingLabel(String),

    #[error("requested {requested} classes but the graph has only {available} distinct tails")]
    TooManyClasses { requested: usize, available: usize },

    #[error("k-nearest-neighbour search needs at least {needed} vectors, have {available}")]
    TooFewVectors { needed: usize, available: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("k_c = {k_c} is outside 1..={max}")]
    CutoffOutOfRange { k_c: usize, max: usize },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { what: &'static str, iterations: usize, residual: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("performance table row {line}: {message}")]
    PerformanceRow { line: usize, message: String },

    #[error("need at least {needed} datasets present in both profiles and performance table, found {found}")]
    InsufficientOverlap { needed: usize, found: usize },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Io { .. }
            | Error::MissingSplit(_)
            | Error::MalformedTriple { .. }
            | Error::Parse { .. }
            | Error::DimensionMismatch { .. }
            | Error::DuplicateLabel(_)
            | Error::MissingLabel(_)
            | Error::PerformanceRow { .. }
            | Error::Json(_)
            | Error::Csv(_) => ErrorKind::Input,
            Error::InsufficientOverlap { .. } => ErrorKind::Analysis,
            _ => ErrorKind::Compute,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
