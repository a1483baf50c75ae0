//! Exact and p-adic arithmetic for multiple zeta and multiple L-values.
//!
//! The crate computes twisted (multiple) Bernoulli numbers, desingularized
//! multiple zeta values at non-positive integers, p-adic multiple L-values
//! at integer points, and p-adic rigid twisted multiple polylogarithms —
//! each quantity through at least two independent routes so the identities
//! tying them together can be cross-validated numerically and exactly.

pub mod bernoulli;
pub mod cyclotomic;
pub mod desing;
pub mod error;
pub mod lfunction;
pub mod measure;
pub mod padic;
pub mod rational;
pub mod series;
pub mod twisted;

pub use error::{Error, Result};
pub use rational::Rational;
