//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series did not satisfy its stopping rule within the term cap.
    #[error("series for {what} did not converge within {terms} terms (lambda = {lambda})")]
    SeriesDivergence {
        what: &'static str,
        terms: usize,
        lambda: f64,
    },

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature for {what} failed to reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureTolerance {
        what: &'static str,
        tol: f64,
        estimate: f64,
    },

    /// A stick sequence did not reach the requested residual within the cap.
    #[error("stick truncation failed: residual {residual:e} > {eps:e} after {sticks} sticks")]
    TruncationFailure {
        residual: f64,
        eps: f64,
        sticks: usize,
    },

    /// Sampling-importance-resampling collapsed below the effective-sample-size floor.
    #[error("importance step degenerate: ess {ess:.1} < floor {floor:.1} with {proposals} proposals")]
    ImportanceDegeneracy {
        ess: f64,
        floor: f64,
        proposals: usize,
    },

    /// Rejection sampling exhausted its proposal budget.
    #[error("rejection budget of {budget} proposals exhausted for {what}")]
    RejectionBudget { what: &'static str, budget: usize },

    /// A user-supplied bound on h was violated by an observed evaluation.
    #[error("supplied sup h = {claimed} violated: observed h({t}) = {observed}")]
    InvalidBound { claimed: f64, t: f64, observed: f64 },

    /// Numeric CDF inversion could not bracket the target quantile.
    #[error("numeric inversion failed for {0}")]
    InversionFailure(&'static str),

    /// Model (de)serialization problem.
    #[error("model serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
