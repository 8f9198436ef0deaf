use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Returned by a budgeted evaluator once every allowed evaluation has been spent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("evaluation budget of {t_max} exhausted")]
pub struct BudgetExhausted {
    pub t_max: usize,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid search space: {0}")]
    InvalidSpace(String),

    #[error("insufficient population: need {needed} eligible members, have {available}")]
    InsufficientPopulation { needed: usize, available: usize },

    #[error("individual {0} has no fitness yet")]
    PendingFitness(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid test function descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("normalization undefined: reference value is zero")]
    NormalizationUndefined,

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("budget audit failed: {0}")]
    BudgetAudit(String),

    #[error(transparent)]
    Budget(#[from] BudgetExhausted),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
