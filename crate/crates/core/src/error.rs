//! Crate-wide error type.

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix")]
    SingularMatrix,

    /// The factorization in question does not exist because the element
    /// (or its leading block) lies off the big cell.
    #[error("element lies off the big cell")]
    OffCell,

    #[error("point violates the affine chart: {0}")]
    ChartViolation(String),

    #[error("matrix is not an element of the algebra: {0}")]
    NotInAlgebra(String),

    #[error("matrix does not satisfy the group constraints: {0}")]
    NotInGroup(String),

    #[error("operands belong to different models")]
    ModelMismatch,

    #[error("no origin symmetry exists for this model")]
    NoOriginSymmetry,

    #[error("point not covered by the symmetry system: {0}")]
    Uncovered(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
