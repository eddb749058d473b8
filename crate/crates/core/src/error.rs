use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("element has a nonzero constant term; exp would need a transcendental constant")]
    NonzeroConstant,

    #[error("element is not a unit: {0}")]
    NotUnit(String),

    #[error("series iteration did not terminate after {0} steps")]
    NonConvergent(usize),

    #[error("y-exponents may have been dropped by the bound Y={ybound} below the q-order {order}")]
    Saturated { ybound: u32, order: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("recursion depth {0} exceeded")]
    RecursionDepth(usize),

    #[error("sum is not bounded at finite q-order: {0}")]
    Unbounded(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
