//! Constrained lattice sums and their reduction to bi-brackets.

mod combination;
mod decompose;
mod eliminate;
mod powers;
mod spec;

pub use combination::{normalize_key, BiBracketCombination, BiBracketKey};
pub use decompose::order_decompose;
pub use eliminate::{eliminate, eliminate_with, reduce_spec, ReduceOptions, ReduceStats, DEFAULT_MAX_DEPTH};
pub use powers::{faulhaber, power_sum_eq, power_sum_le, NPoly};
pub use spec::{sumspec_eval, sumspec_eval_budget, ChainOrdering, ChainSpec, Constraint, Group, SumSpec, DEFAULT_EVAL_BUDGET};
