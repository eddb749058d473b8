//! Exact computer algebra for multiple q-zeta values.
//!
//! The crate computes brackets, bi-brackets, Okounkov's Z-values and
//! Eisenstein series as truncated q-series over the rationals, expands
//! q-Pochhammer product traces in exponential formal variables, reduces
//! constrained lattice sums to bi-bracket combinations, and certifies span
//! membership by exact linear algebra.

pub mod error;
pub mod series;
pub mod special;
pub mod products;
pub mod reduction;
pub mod span;
pub mod json;
pub mod selftest;

pub use error::{Error, Result};
