use thiserror::Error;

#[derive(Debug, Error)]
pub enum GsnnError {
    #[error("generator {index} is not an orthogonal {dim}x{dim} matrix")]
    NonOrthogonalGenerator { index: usize, dim: usize },
    #[error("group closure exceeded the order bound {bound}")]
    OrderBoundExceeded { bound: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid subgroup pair: {0}")]
    InvalidPair(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("signed permutation representation is not irreducible")]
    NotIrreducible,
    #[error("operation is not available in this arithmetic mode")]
    UnsupportedMode,
    #[error("weight vector is zero")]
    ZeroWeight,
    #[error("output scale `a` must be nonzero")]
    ZeroOutputScale,
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GsnnError>;
