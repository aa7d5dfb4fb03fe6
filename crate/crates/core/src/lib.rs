//! Distance-rationalizable voting rules with exact arithmetic.
//!
//! Everything numeric is generic over [`Scalar`]; [`Rational`] (arbitrary
//! precision) is the default and the only type used for tie decisions in the
//! test suites.

pub mod consensus;
pub mod dr_engine;
pub mod elections;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod metrics;
pub mod rankings;
pub mod scalar;
pub mod transport;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary precision rational, the default scalar.
pub type Rational = num_rational::BigRational;
/// Fixed-width rational for small, fast exact experiments.
pub type Rational64 = num_rational::Rational64;
