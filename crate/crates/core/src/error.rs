use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma-function argument too large for double precision.
    #[error("gamma overflow: x = {0} exceeds 170")]
    Overflow(f64),

    /// An iterative scheme (quadrature, series, continued fraction) failed
    /// to reach the requested tolerance within its budget.
    #[error("failed to converge: {0}")]
    Nonconvergence(String),

    /// Operation undefined for this order regime.
    #[error("regime error: {0}")]
    Regime(String),

    /// Malformed time grid.
    #[error("grid error: {0}")]
    Grid(String),

    /// Cholesky factorization failed even after the jitter policy.
    #[error(
        "factorization failure: matrix not positive definite after {attempts} jitter attempts"
    )]
    Factorization { attempts: usize },

    /// Evaluation requested exactly at a non-integrable singular point.
    #[error("singular point: {0}")]
    Singular(String),
}

pub type Result<T> = std::result::Result<T, Error>;
