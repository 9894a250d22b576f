//! Exact verification laboratory for weighted generalized pseudocontractions
//! on `(ℕ, |x − y|)` and their instantiation on the accelerated Collatz map.
//!
//! - [`framework`]: the defining inequality, λ-symmetrization, the per-pair
//!   conditions and orbit decay diagnostics, generic over weight systems.
//! - [`collatz`]: the maps `C` and `T` and stopping times.
//! - [`collatz_weights`]: the explicit weight tables for `T`, their case split
//!   and closed forms.
//! - [`verifier`]: exhaustive sweeps with mergeable reports.
//!
//! All arithmetic is exact and overflow-checked.

pub mod collatz;
pub mod collatz_weights;
pub mod error;
pub mod exact;
pub mod framework;
pub mod verifier;

pub use error::{Error, Result};
pub use exact::Rational;

/// A positive integer point of the metric space.
pub type Point = u128;
