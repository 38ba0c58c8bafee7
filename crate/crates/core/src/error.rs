use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: expected {expected} samples, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid too coarse for dyadic block {requested}; largest feasible block index is {max_feasible}")]
    BankTooFine { requested: i32, max_feasible: i32 },

    #[error("dyadic index {index} outside filter bank [{j_min}, {j_max}]")]
    IndexOutsideBank { index: i32, j_min: i32, j_max: i32 },

    #[error("field is not supported in dyadic band {band}: {reason}")]
    NotBanded { band: i32, reason: String },

    #[error("parameter gate violated: s = {s} must lie in ({lower}, 1) for s1 = {s1} (s1 must exceed 2)")]
    ParameterGate { s: f64, s1: f64, lower: f64 },

    #[error("solution blew up at t = {time}: {reason}")]
    BlowUp { time: f64, reason: String },

    #[error("power-law fit rejected: {0}")]
    Fit(String),

    #[error("snapshot spacing {spacing} too coarse for the Duhamel quadrature; use spacing <= {required}")]
    InsufficientCadence { spacing: f64, required: f64 },

    #[error("profile not integrable: {0}")]
    NonIntegrable(String),

    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),

    #[error("missing series `{0}`")]
    MissingSeries(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
