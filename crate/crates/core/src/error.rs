use thiserror::Error;

use crate::sparse::Spectrum;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("resolution {resolution} too coarse for Koch level {level}; need resolution > {min_resolution}")]
    ResolutionTooCoarse {
        level: u32,
        resolution: f64,
        min_resolution: f64,
    },

    #[error("empty cell set")]
    EmptySet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero vector")]
    ZeroVector,

    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("cell set belongs to a different domain")]
    DomainMismatch,

    #[error("eigensolver did not converge after {iterations} iterations ({converged} of {requested} pairs converged)")]
    NotConverged {
        iterations: usize,
        converged: usize,
        requested: usize,
        partial: Box<Spectrum>,
    },

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
