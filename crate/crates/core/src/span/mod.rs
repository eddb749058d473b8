//! Span membership of q-series in the bracket families.

mod basis;
mod linalg;
mod solve;
mod verify;

pub use basis::{
    bracket_monomial_basis, enumerate_basis, enumerate_basis_budget, enumerate_basis_exact, BasisElement, Generator,
    DEFAULT_BASIS_BUDGET,
};
pub use solve::{default_order, express, find_relations, residual, SpanCertificate, SpanStatus, DEFAULT_MARGIN};
pub use verify::{
    verify_theorem, verify_weighted_membership, DegreeBound, MembershipReport, MonomialCheck, Theorem, TheoremReport,
    WeightRule, WeightedFamily,
};
