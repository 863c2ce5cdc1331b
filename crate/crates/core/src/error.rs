use thiserror::Error;

/// Errors raised by law evaluation, numerics, samplers and statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is not defined for this law variant or size.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Adaptive quadrature ran out of subdivisions. `estimate` is the best
    /// value reached.
    #[error("no convergence after {depth} bisections (estimate {estimate}, error {error_estimate})")]
    Convergence {
        estimate: f64,
        error_estimate: f64,
        depth: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
