use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("grid size must be at least 1")]
    EmptyGrid,
    #[error("measure must have at least one atom")]
    EmptyMeasure,
    #[error("atom {index}: mass {mass} is not strictly positive and finite")]
    BadMass { index: usize, mass: f64 },
    #[error("exponent p = {0} must be positive and finite")]
    BadExponent(f64),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value at atom {index} is not finite")]
    NonFinite { index: usize },
    #[error("operands live on different measures")]
    MeasureMismatch,
    #[error("negative argument {0} to log⁺")]
    NegativeLogArgument(f64),
    #[error("weight value {value} at atom {index} is not strictly positive")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("weight has no closed-form descriptor, cannot be refined")]
    MissingDescriptor,
    #[error("radius {0} outside [0, 1)")]
    RadiusOutOfRange(f64),
    #[error("outer functions need a circle grid measure")]
    NotACircleGrid,
    #[error("F-norm bisection did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("bad generator spec `{spec}`: {reason}")]
    BadGenerator { spec: String, reason: String },
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("{path} line {line}: {reason}")]
    Csv { path: String, line: u64, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
