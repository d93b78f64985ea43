use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid sparse structure: {0}")]
    InvalidStructure(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("matrix is numerically singular (condition estimate {condition:.3e})")]
    Singular { condition: f64 },
    #[error("zero pivot in incomplete factorization at row {row}")]
    ZeroPivot { row: usize },
    #[error("eigensolver did not converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },
    #[error("search spaces are not nested (containment defect {defect:.3e})")]
    NotNested { defect: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
