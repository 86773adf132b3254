use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not unitary: max |U^dag U - I| = {residual:e} exceeds {tolerance:e}")]
    NotUnitary { residual: f64, tolerance: f64 },

    #[error("matrix is not diagonal: max off-diagonal magnitude {0:e}")]
    NotDiagonal(f64),

    #[error("input columns are not orthonormal: max |<a_i|a_j> - delta_ij| = {0:e}")]
    NotOrthonormal(f64),

    #[error("{given} columns cannot be completed inside dimension {dim}")]
    TooManyColumns { given: usize, dim: usize },

    #[error("invalid Schmidt weights: {0}")]
    InvalidWeights(String),

    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: String },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("family size {k} outside the searchable range {min}..={max}")]
    SizeOutOfRange { k: usize, min: usize, max: usize },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
