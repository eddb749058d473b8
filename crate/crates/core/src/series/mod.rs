//! Exact truncated-series arithmetic.

pub mod poly;
pub mod qseries;
pub mod rational;
pub mod ring;

pub use qseries::QSeries;
pub use rational::{int, rat, Rational};
pub use ring::{bell_coefficient, Context, FormalVar, Mono, Ring, RingElement, Truncation, YExp, YLayer, YLimit};
