use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid space identifier `{0}`")]
    InvalidSpaceId(String),

    #[error("invalid model space: {0}")]
    InvalidSpace(String),

    #[error("radius {r} outside the domain {domain}")]
    Domain { r: f64, domain: String },

    #[error("operation not supported for {0}")]
    UnsupportedSpace(String),

    #[error("exponent pair violates alpha + 2 beta = n - 1 (alpha = {alpha}, beta = {beta}, n = {n})")]
    InconsistentExponents { alpha: String, beta: String, n: i64 },

    #[error("invalid exponents: {0}")]
    InvalidExponents(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("curvature field is not symmetric at r = {r} (asymmetry {asymmetry:e})")]
    AsymmetricField { r: f64, asymmetry: f64 },

    #[error("integrator failed to converge near r = {r}: {reason}")]
    Divergence { r: f64, reason: String },

    #[error("Jacobi tensor is singular at r = {r} (conjugate point)")]
    Singular { r: f64 },

    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),

    #[error("degenerate recursion at index {index}")]
    DegenerateRecursion { index: usize },

    #[error("polynomial degree {degree} below the required {required}")]
    DegreeTooLow { degree: usize, required: usize },

    #[error("polynomial has a non-real root {re} + {im}i")]
    NonRealRoot { re: f64, im: f64 },

    #[error("polynomial has a repeated root near {0}")]
    RepeatedRoot(f64),

    #[error("profile sample {value} at r = {r} is not positive")]
    NonPositiveSample { r: f64, value: f64 },

    #[error("profile is not of density form (relative misfit {residual:e})")]
    PoorFit { residual: f64 },

    #[error("profile has zero derivative norm; constant profiles cannot be embedded")]
    ConstantProfile,

    #[error("screw functions differ by {deviation:e}")]
    ScrewMismatch { deviation: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
