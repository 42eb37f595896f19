use thiserror::Error;

use crate::latin::{IlsError, LatinViolation, PartitionError, ShapeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The requested object does not exist (the message names the failed condition).
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("invalid outline: {0}")]
    InvalidOutline(String),
    #[error("search budget of {budget} nodes exhausted")]
    Timeout { budget: u64 },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl From<IlsError> for Error {
    fn from(e: IlsError) -> Self {
        Error::Internal(format!("constructed square failed verification: {e}"))
    }
}

impl From<LatinViolation> for Error {
    fn from(e: LatinViolation) -> Self {
        Error::Internal(format!("constructed square is not latin: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
