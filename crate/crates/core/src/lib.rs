//! Overlapping coefficient Δ_k of k ≥ 2 normal distributions.
//!
//! Δ_k = ∫ min{f₁(x), …, f_k(x)} dx is the probability mass shared by all k
//! densities. This crate computes it three ways:
//!
//! - an exact reference oracle (closed composite Simpson with grid doubling),
//! - transformed-Simpson plug-in estimators from data, using a generalized
//!   logistic change of variables with shape α fixed or estimated,
//! - a group-ratio comparator estimator,
//!
//! plus a seeded, thread-count-independent Monte Carlo harness that scores
//! estimators by AV / RB / RRMSE / EFF and reproduces the built-in benchmark
//! study. The `ovl` binary fronts all of it; see the README.

pub mod cli;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod quadrature;
pub mod simulation;
pub mod transform;

pub use error::{OvlError, Result};
