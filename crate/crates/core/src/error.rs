use thiserror::Error;

/// Errors raised anywhere in the skeleton pipeline.
#[derive(Debug, Error)]
pub enum SkelError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("degenerate pair: the two points coincide")]
    DegeneratePair,

    #[error("invalid beta {0}: must be finite and > 0")]
    InvalidBeta(f64),

    #[error("radius {radius} is below half the pair distance {half_distance}")]
    RadiusTooSmall { radius: f64, half_distance: f64 },

    #[error("non-finite coordinate in point {0}")]
    NonFinite(usize),

    #[error("duplicate point id {0}")]
    DuplicateId(usize),

    #[error("points {0} and {1} have identical coordinates")]
    DuplicateCoordinates(usize, usize),

    #[error("point set needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("metric mismatch between lens and frame")]
    MetricMismatch,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, SkelError>;
