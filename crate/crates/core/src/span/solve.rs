//! Exact span membership and relations at a fixed q-order.

use num_traits::Zero;
use serde::Serialize;

use super::basis::BasisElement;
use super::linalg::Echelon;
use crate::error::{Error, Result};
use crate::series::{QSeries, Rational};

/// Extra q-coefficients beyond the basis size asked of callers.
pub const DEFAULT_MARGIN: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanStatus {
    Member,
    RefutedAtOrder,
}

/// Outcome of [`express`]. Membership is only ever certified up to
/// `q^q_order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCertificate {
    pub status: SpanStatus,
    /// Coordinates in basis order.
    pub coordinates: Vec<(String, Rational)>,
    pub q_order: usize,
    pub residual: QSeries,
    /// Fewer q-coefficients than basis elements.
    pub underdetermined: bool,
}

impl SpanCertificate {
    pub fn is_member(&self) -> bool {
        self.status == SpanStatus::Member
    }

    pub fn coordinate(&self, label: &str) -> Rational {
        self.coordinates.iter().find(|(l, _)| l == label).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Only the nonzero coordinates.
    pub fn support(&self) -> Vec<(String, Rational)> {
        self.coordinates.iter().filter(|(_, c)| !c.is_zero()).cloned().collect()
    }
}

fn columns(basis: &[BasisElement], target: Option<&QSeries>, order: usize) -> Result<Vec<Vec<Rational>>> {
    let all: Vec<&QSeries> = basis.iter().map(|b| &b.series).chain(target).collect();
    if let Some(short) = all.iter().find(|s| s.order() < order) {
        return Err(Error::InvalidArgument(format!(
            "series known to q^{} only, solving at q-order {order}",
            short.order()
        )));
    }
    Ok((0..=order).map(|k| all.iter().map(|s| s.coeff(k)).collect()).collect())
}

/// `target - sum c_i basis_i`.
pub fn residual(target: &QSeries, basis: &[BasisElement], coords: &[Rational], order: usize) -> QSeries {
    let mut r = target.truncate(order);
    for (b, c) in basis.iter().zip(coords) {
        if !c.is_zero() {
            r.sub_assign_ref(&b.series.truncate(order).scale(c));
        }
    }
    r
}

/// Solves `target = sum c_i basis_i` on the coefficients of `q^0..q^N`.
/// Free coordinates are set to zero; the residual is recomputed from the
/// coordinates and decides the status.
pub fn express(target: &QSeries, basis: &[BasisElement], order: usize) -> Result<SpanCertificate> {
    let n = basis.len();
    let rows = columns(basis, Some(target), order)?;
    let e = Echelon::new(&rows, n + 1);
    let coords = e.solve(Some(n), &[]);
    let res = residual(target, basis, &coords, order);
    let status = if res.is_zero() { SpanStatus::Member } else { SpanStatus::RefutedAtOrder };
    Ok(SpanCertificate {
        status,
        coordinates: basis.iter().map(|b| b.label.clone()).zip(coords).collect(),
        q_order: order,
        residual: res,
        underdetermined: order + 1 < n,
    })
}

/// A basis of the kernel of the coefficient matrix: candidate relations
/// among the basis series, valid up to `q^N`.
pub fn find_relations(basis: &[BasisElement], order: usize) -> Result<Vec<Vec<Rational>>> {
    let rows = columns(basis, None, order)?;
    Ok(Echelon::new(&rows, basis.len()).kernel(basis.len()))
}

/// `2 * size + margin`.
pub fn default_order(basis_size: usize) -> usize {
    2 * basis_size + DEFAULT_MARGIN
}
