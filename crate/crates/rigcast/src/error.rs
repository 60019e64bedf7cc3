//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid avatar identity {id}: {reason}")]
    InvalidIdentity { id: u32, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("empty dataset: {0}")]
    EmptyDataset(String),

    #[error("non-finite value in loss term `{term}`")]
    NonFinite { term: String },

    #[error("embedding is not unit-norm (|norm - 1| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("triplet generation infeasible: gap {gap} unmet after {attempts} attempts")]
    InfeasibleGap { gap: f64, attempts: usize },

    #[error("model stage mismatch: expected {expected}, found {found}")]
    StageMismatch { expected: String, found: String },

    #[error("corrupt archive {path}: {reason}")]
    CorruptArchive { path: String, reason: String },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Tensor(#[from] candle_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("image codec error: {0}")]
    Image(String),
}

impl From<image::ImageError> for Error {
    fn from(e: image::ImageError) -> Self {
        Error::Image(e.to_string())
    }
}
