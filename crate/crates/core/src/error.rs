use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Grid fails `z[-k,-l] == conj(z[k,l])` beyond tolerance.
    #[error("grid is not fourier-real: residual {residual:e} at (k={k}, l={l}) exceeds {tolerance:e}")]
    SymmetryViolation { k: i64, l: i64, residual: f64, tolerance: f64 },

    /// Grid fails `w[l,k] == conj(w[k,l])` beyond tolerance.
    #[error("grid is not hermitian: residual {residual:e} at (k={k}, l={l}) exceeds {tolerance:e}")]
    HermiticityViolation { k: i64, l: i64, residual: f64, tolerance: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sequence has zero leading term; no Dirichlet inverse exists")]
    NotInvertible,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no zero ordinates at or below T = {0}")]
    EmptyRange(f64),

    #[error("zero table line {line}: {message}")]
    ZeroTableParse { line: usize, message: String },

    #[error("integration diverged at t = {t}: {message}")]
    Diverged { t: f64, message: String },

    #[error("grid format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
