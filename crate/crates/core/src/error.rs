use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymdomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("pair is not quasi-invertible: |1 - (z|w)| = {0:e}")]
    QuasiSingular(f64),

    #[error("point is not in the open unit ball: (z|z) = {0}")]
    NotInterior(f64),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("Pochhammer pole: ({a})_{k} vanishes in a denominator")]
    PochhammerPole { a: f64, k: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Cauchy radius {radius} exceeds the analyticity margin {margin}")]
    AnalyticityRadius { radius: f64, margin: f64 },

    #[error("matrix square root undefined: eigenvalue {0} has non-positive real part")]
    BranchFailure(String),

    #[error("tail estimate {estimate:e} exceeds tolerance {tol:e} at cap {cap}")]
    TailBound { estimate: f64, tol: f64, cap: usize },

    #[error("Gram matrix is not hermitian: defect {0:e}")]
    NonHermitian(f64),

    #[error("Gram matrix is singular or indefinite at block {0}")]
    GramSingular(usize),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SymdomError>;
