use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The distribution has no finite mean, so tail integrals and prophet
    /// values diverge.
    #[error("infinite mean: {0}")]
    InfiniteMean(String),

    /// The horizon is too small for the requested threshold construction.
    #[error("horizon too small: {0}")]
    HorizonTooSmall(String),

    /// A quantile needed as a denominator evaluated to zero.
    #[error("degenerate quantile: {0}")]
    DegenerateQuantile(String),

    /// A precondition on the inputs was not met.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Draw vector length does not match the policy horizon.
    #[error("length mismatch: policy horizon is {expected}, got {actual} draws")]
    LengthMismatch { expected: usize, actual: usize },

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error}")]
    Quadrature { estimate: f64, error: f64 },

    /// A distribution spec string could not be parsed.
    #[error("cannot parse distribution spec '{spec}': {reason}")]
    Parse { spec: String, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
