use thiserror::Error;

/// Every failure the library can report.
///
/// Verdict-like outcomes (an infeasible triple, a frame that cannot be
/// scaled) are not errors; they are returned as values by the operations
/// that decide them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("coefficient {index} is negative or not finite ({value})")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("ambient dimension {0} is below 2")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a real frame")]
    RequiresRealField,

    #[error("frame is not flagged unit-norm")]
    NotUnitNorm,

    #[error("vector {index} has norm {norm}, outside the unit-norm tolerance")]
    NormViolation { index: usize, norm: f64 },

    #[error("all frame vectors are zero")]
    AllZeroFrame,

    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("nearest-point iteration hit its limit of {iterations} with duality gap {gap:e}")]
    IterationLimit { iterations: usize, gap: f64 },

    #[error("perceptron did not separate the points within {updates} updates")]
    IterationCap { updates: usize },

    #[error("diagram Gramian has a trivial null space")]
    EmptyNullSpace,

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("unsupported dimension {0}; only n = 2 and n = 3 are sampled")]
    UnsupportedDimension(usize),

    #[error("frame violates property (Q)")]
    PropertyQViolated,

    #[error("planar accumulation failed: residual {residual:e}, zero coefficients at {zero_indices:?}")]
    AccumulationFailed {
        residual: f64,
        zero_indices: Vec<usize>,
    },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
