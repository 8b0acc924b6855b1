//! Error type shared across the crate.

use crate::presentation::PresId;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("presentation mismatch: expected {expected}, got {got}")]
    PresentationMismatch { expected: PresId, got: PresId },

    #[error("unknown generator `{name}` in algebra {algebra}")]
    UnknownGenerator { name: String, algebra: PresId },

    #[error("no symbol map is defined on algebra {0}")]
    NoSymbolMap(PresId),

    #[error("incompatible pair at grade {n}: symbol side is `{symbol}`, scalar side is `{alpha}`")]
    IncompatiblePair {
        n: i64,
        symbol: String,
        alpha: String,
    },

    #[error("element does not lie in L_{expected}: support is {support:?}")]
    NotInGrade { expected: i64, support: Vec<i64> },

    #[error("truncation dimension {dim} too small: need at least {need}")]
    DimensionTooSmall { dim: usize, need: usize },

    #[error("lift inversion violation: symbol matrices are not mutually inverse ({detail})")]
    LiftInversion { detail: String },

    #[error("coefficient solve for the line-bundle frame failed: {0}")]
    SingularSolve(String),

    #[error("input matrix is not an idempotent: {0}")]
    NotIdempotent(String),

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("division by a non-invertible element: {0}")]
    NotInvertible(String),

    #[error("grading error: {0}")]
    Grading(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
