use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A denominator Pochhammer factor vanished before the series terminated.
    #[error("pole: {0}")]
    Pole(String),

    /// The series is outside its region of convergence.
    #[error("divergent series: {0}")]
    Divergence(String),

    /// A sub-series of a composite formula ran out of budget.
    #[error("{term} did not converge (value {estimate}, error estimate {error_estimate})")]
    SeriesNotConverged {
        term: String,
        estimate: f64,
        error_estimate: f64,
    },

    /// Adaptive quadrature ran out of its evaluation budget.
    #[error("{axis} quadrature did not converge (estimate {estimate}, error estimate {error_estimate})")]
    QuadratureNotConverged {
        axis: String,
        estimate: f64,
        error_estimate: f64,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn pole(msg: impl Into<String>) -> Self {
        Error::Pole(msg.into())
    }

    pub(crate) fn divergence(msg: impl Into<String>) -> Self {
        Error::Divergence(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
