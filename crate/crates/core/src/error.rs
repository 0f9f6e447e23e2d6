use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("method {method} is not symmetric (node c1 = {c1})")]
    NonSymmetricMethod { method: String, c1: f64 },

    #[error("filter expressions for {method} disagree by {residual:e} at nu = {nu}")]
    InconsistentFilter { method: String, nu: f64, residual: f64 },

    #[error("stepsize is resonant: cos(nu/2) vanishes at nu = {nu}")]
    ResonantStepsize { nu: f64 },

    #[error("coefficient function vanishes at nu = {nu}")]
    ZeroCoefficient { nu: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Stable variant name, used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NonSymmetricMethod { .. } => "NonSymmetricMethod",
            Error::InconsistentFilter { .. } => "InconsistentFilter",
            Error::ResonantStepsize { .. } => "ResonantStepsize",
            Error::ZeroCoefficient { .. } => "ZeroCoefficient",
        }
    }
}
