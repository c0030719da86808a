use thiserror::Error;

/// Errors raised by the numeric core, the potentials, and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is numerically zero")]
    ZeroMatrix,

    #[error("invalid rank {rank} for a {rows}x{cols} matrix")]
    InvalidRank { rank: usize, rows: usize, cols: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    #[error("block {index} is a zero submatrix")]
    ZeroBlock { index: usize },

    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("regularizer {variant} is not defined over the {field} field")]
    FieldMismatch { variant: &'static str, field: &'static str },

    #[error("x is not the conjugate gradient image of x* (deviation {deviation:.3e})")]
    NotASubgradient { deviation: f64 },

    #[error("subset enumeration refused: {cols} columns exceeds the cap of {max}")]
    TooManyColumns { cols: usize, max: usize },

    #[error("oracle solution does not satisfy A x = y (relative residual {residual:.3e})")]
    OracleMismatch { residual: f64 },

    #[error("matrix has full row rank, so the null space of its adjoint is trivial")]
    DegenerateNullspace,

    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn dim_mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::DimensionMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
