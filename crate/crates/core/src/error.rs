//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum OvlError {
    /// A domain-type invariant was violated at construction.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// All observations in a group are identical, so the fitted variance is
    /// zero and the plug-in density is undefined.
    #[error("degenerate sample in group {group}: zero variance")]
    DegenerateSample { group: usize },

    /// Too few observations for the requested variance convention.
    #[error("insufficient data in group {group}: n = {n}, need at least 2")]
    InsufficientData { group: usize, n: usize },

    /// A group's softplus sum underflowed to zero, so the data-driven shape
    /// estimate is undefined.
    #[error("degenerate alpha estimate: softplus sum underflowed in group {group}")]
    DegenerateAlpha { group: usize },

    /// An argument fell outside the function's open domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// An integrand evaluated to a non-finite value at a quadrature node.
    #[error("non-finite integrand value at node {at}")]
    NonFiniteEvaluation { at: f64 },

    /// Grid refinement did not reach the requested tolerance.
    #[error("no convergence: last refinement delta {last_delta:e} at r = {subintervals}")]
    NoConvergence { subintervals: usize, last_delta: f64 },

    /// Efficiency is undefined: the candidate has zero MSE while the
    /// comparator does not.
    #[error("zero candidate MSE with nonzero comparator MSE")]
    ZeroMse,

    /// The reference-delta oracle failed while running a scenario.
    #[error("oracle failure in scenario '{scenario}': {detail}")]
    OracleFailure { scenario: String, detail: String },

    /// A Monte Carlo repetition produced an unusable sample; the run aborts
    /// with the repetition index for forensics.
    #[error("scenario '{scenario}' repetition {repetition}: {detail}")]
    DegenerateRepetition {
        scenario: String,
        repetition: usize,
        detail: String,
    },

    /// A configuration document failed schema or semantic validation.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, OvlError>;
