//! Shared error type for evaluator and discretization failures.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the validity domain of an evaluator
    /// (wrong half-plane, non-positive distance, parameter out of range).
    #[error("domain error: {0}")]
    Domain(String),

    /// Result magnitude outside representable floating-point range.
    #[error("range error: {0}")]
    Range(String),

    /// A quadrature failed to reach its accuracy target.
    #[error("accuracy error: {0}")]
    Accuracy(String),

    /// An improper integral diverges; the message names the failing
    /// decay condition.
    #[error("divergence error: {0}")]
    Divergence(String),

    /// A required object from another module is unavailable.
    #[error("dependency error: {0}")]
    Dependency(String),

    /// Estimated work exceeds the configured node budget.
    #[error("budget error: {0}")]
    Budget(String),

    /// Caller misuse (empty sample set, invalid configuration key, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A refinement-stability gate failed; the result is neither a pass
    /// nor a fail.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}
