use thiserror::Error;

/// Errors raised by state construction, box handling and protocol analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate register label `{0}`")]
    DuplicateLabel(String),
    #[error("label `{0}` appears in both operands")]
    LabelCollision(String),
    #[error("unknown register label `{0}`")]
    UnknownLabel(String),
    #[error("invalid factor dimension {dim} for label `{label}` (must be >= 2)")]
    InvalidDimension { label: String, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (deviation {0:e})")]
    NotNormalized(f64),
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),
    #[error("state is not maximally entangled (unitarity residual {residual:e})")]
    NotMaxEntangled { residual: f64 },
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("register mismatch: {0}")]
    RegisterMismatch(String),
    #[error("protocol inapplicable: {0}")]
    ProtocolInapplicable(String),
    #[error("malformed box file: {0}")]
    BoxFile(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
