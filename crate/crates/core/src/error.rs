use thiserror::Error;

/// Errors raised by depth computations, statistics and dataset handling.
#[derive(Debug, Error)]
pub enum DepthError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("direction grid is empty")]
    EmptyGrid,

    #[error("vectors are not orthogonal (inner product {0:e})")]
    NotOrthogonal(f64),

    #[error("covariance matrix is singular or not positive-definite; {hint}")]
    Singular { hint: String },

    #[error("constant data: {0}")]
    ConstantData(String),

    #[error("labels must contain both classes (positives {positives}, negatives {negatives})")]
    SingleClass { positives: usize, negatives: usize },

    #[error("query point {index}: {source}")]
    AtPoint {
        index: usize,
        #[source]
        source: Box<DepthError>,
    },

    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    #[error("label column not found: {0}")]
    MissingLabelColumn(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DepthError>;
