use thiserror::Error;

use crate::poly::ParseError;

/// Largest matrix row count any operation accepts.
pub const MAX_DIM: usize = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A*| = {residual:e} exceeds {tolerance:e}")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("site count mismatch: {left} vs {right}")]
    SitesMismatch { left: usize, right: usize },
    #[error("expected a single-site polynomial, got {sites} sites")]
    NotSingleSite { sites: usize },
    #[error("singular linear system (pivot {pivot} has magnitude {magnitude:e})")]
    Singular { pivot: usize, magnitude: f64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::DimensionCap { dim, cap: MAX_DIM })
    } else {
        Ok(())
    }
}
