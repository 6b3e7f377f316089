use thiserror::Error;

/// Errors raised by the geometry and diagnostics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed arguments: out-of-range parameters, points that violate
    /// the membership constraints of their space, and the like.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A point or geodesic belongs to a different space than the one it is
    /// used with.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    /// The arguments are well formed but an operation precondition fails
    /// (insufficient net, probe equal to the candidate limit, ...).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("1D minimization did not converge after {iterations} iterations (last bracket [{lo}, {hi}])")]
    NonConvergence { iterations: usize, lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
