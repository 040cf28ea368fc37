use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("map is not completely positive (minimum Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCp { min_eigenvalue: f64 },

    #[error("map is not trace preserving (deviation {deviation:.3e})")]
    NotTp { deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotState(String),

    #[error("{family} parameter {value} outside the completely positive range [{lo}, {hi}]")]
    OutOfCpRange {
        family: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("composition equation is inconsistent (residual {residual:.3e})")]
    InconsistentSystem { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
