//! Weight-bound verification of trace coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::basis::{bracket_monomial_basis, enumerate_basis, enumerate_basis_exact, BasisElement};
use super::solve::{default_order, express, SpanCertificate};
use crate::error::{Error, Result};
use crate::products::{trace_y0, TraceKind, TraceSpec};
use crate::series::{Mono, QSeries, RingElement, Truncation};
use crate::special::FamilyTag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightRule {
    Exact,
    AtMost,
}

/// The spanning sets used for weight verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightedFamily {
    /// Index families, graded by index weight.
    Family(FamilyTag),
    /// Monomials in the brackets `[k]`, `k >= 2`, graded additively; spans
    /// the same algebra as the Z-values with entries `>= 2`.
    QmzvBracketMonomials,
}

impl fmt::Display for WeightedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightedFamily::Family(t) => write!(f, "{t}"),
            WeightedFamily::QmzvBracketMonomials => write!(f, "qMZV (bracket monomials)"),
        }
    }
}

impl WeightedFamily {
    pub fn basis(self, weight: u32, rule: WeightRule, order: usize) -> Result<Vec<BasisElement>> {
        match (self, rule) {
            (WeightedFamily::Family(t), WeightRule::Exact) => enumerate_basis_exact(t, weight, order),
            (WeightedFamily::Family(t), WeightRule::AtMost) => enumerate_basis(t, weight, order),
            (WeightedFamily::QmzvBracketMonomials, WeightRule::Exact) => bracket_monomial_basis(weight, order),
            (WeightedFamily::QmzvBracketMonomials, WeightRule::AtMost) => {
                let mut out = Vec::new();
                for w in 0..=weight {
                    out.extend(bracket_monomial_basis(w, order)?);
                }
                Ok(out)
            }
        }
    }
}

/// Bound on the degree in some variables by the degree in others.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    pub vars: Vec<String>,
    pub bounded_by: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialCheck {
    pub monomial: String,
    pub weight: u32,
    pub basis_size: usize,
    pub certificate: SpanCertificate,
    /// `(degree, bound)` when a degree bound was requested.
    pub degree: Option<(u32, u32)>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipReport {
    pub family: WeightedFamily,
    pub rule: WeightRule,
    pub q_order: usize,
    pub checks: Vec<MonomialCheck>,
}

impl MembershipReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// All exponent vectors over `graded` positions of total degree `<= d`.
fn graded_monomials(graded: &[usize], nvars: usize, d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    fn go(graded: &[usize], k: usize, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if k == graded.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[graded[k]] = e;
            go(graded, k + 1, left - e, cur, out);
        }
        cur[graded[k]] = 0;
    }
    go(graded, 0, d, &mut vec![0; nvars], &mut out);
    out.sort_by_key(|m| (m.iter().sum::<u32>(), std::cmp::Reverse(m.clone())));
    out
}

/// Checks every coefficient of `p` (which must be free of y) against the
/// family basis of its weight. The weight of a monomial is its degree in
/// the graded variables; every graded monomial up to the truncation degree
/// is checked, so vanishing coefficients appear as zero targets.
pub fn verify_weighted_membership(
    p: &RingElement,
    family: WeightedFamily,
    rule: WeightRule,
    order: usize,
    degree_bound: Option<&DegreeBound>,
) -> Result<MembershipReport> {
    let ctx = p.context();
    if p.terms().values().any(|layer| layer.keys().any(|y| y.iter().any(|&e| e != 0))) {
        return Err(Error::InvalidArgument("element has y-dependent terms; take the y^0 coefficient first".into()));
    }
    let nv = ctx.vars.len();
    let graded: Vec<usize> = (0..nv).filter(|&i| ctx.vars[i].graded).collect();
    let zero_y = vec![0; ctx.y_vars.len()];
    // stored terms grouped by graded part
    let mut grouped: BTreeMap<Mono, Vec<(Mono, QSeries)>> = BTreeMap::new();
    for (mono, layer) in p.terms() {
        let mut g = mono.clone();
        for (i, v) in ctx.vars.iter().enumerate() {
            if !v.graded {
                g[i] = 0;
            }
        }
        if let Some(s) = layer.get(&zero_y) {
            grouped.entry(g).or_default().push((mono.clone(), s.clone()));
        }
    }
    let mut bases: BTreeMap<u32, Vec<BasisElement>> = BTreeMap::new();
    let mut checks = Vec::new();
    let index = |names: &[String]| -> Vec<usize> { names.iter().filter_map(|n| ctx.var_index(n)).collect() };
    let bound_idx = degree_bound.map(|b| (index(&b.vars), index(&b.bounded_by)));
    for g in graded_monomials(&graded, nv, p.truncation().degree) {
        let w = ctx.graded_degree(&g);
        if let Entry::Vacant(slot) = bases.entry(w) {
            slot.insert(family.basis(w, rule, order)?);
        }
        let basis = &bases[&w];
        let entries = grouped.remove(&g).unwrap_or_else(|| vec![(g.clone(), QSeries::zero(order))]);
        for (mono, series) in entries {
            let certificate = express(&series, basis, order)?;
            let degree = bound_idx.as_ref().map(|(vars, by)| {
                let d: u32 = vars.iter().map(|&i| mono[i]).sum();
                let b: u32 = by.iter().map(|&i| mono[i]).sum();
                (d, b)
            });
            let pass = certificate.is_member() && degree.is_none_or(|(d, b)| d <= b);
            checks.push(MonomialCheck {
                monomial: ctx.format_mono(&mono),
                weight: w,
                basis_size: basis.len(),
                certificate,
                degree,
                pass,
            });
        }
    }
    Ok(MembershipReport { family, rule, q_order: order, checks })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `(q)(xyq)/((xq)(yq))`: coefficient of `z^m w^n` has weight `m + n`.
    Lemma31,
    /// `prod (x_j q)/(y_j q)`: coefficients have exact weight.
    Theorem32(u32),
    /// y^0 part of the two-player trace without `a`, `b`: qBD, weight at most.
    Theorem45,
    /// y^0 part of the N-player trace with formal `a`, `b`: BD, weight at
    /// most, degree in `a`, `b` bounded by the single-variable degree.
    Theorem54(u32),
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem::Lemma31 => write!(f, "lemma31"),
            Theorem::Theorem32(r) => write!(f, "thm32:{r}"),
            Theorem::Theorem45 => write!(f, "thm45"),
            Theorem::Theorem54(n) => write!(f, "thm54:{n}"),
        }
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad theorem parameter in {s:?}")));
        match s.split_once(':') {
            None if s == "lemma31" => Ok(Theorem::Lemma31),
            None if s == "thm45" => Ok(Theorem::Theorem45),
            Some(("thm32", r)) => Ok(Theorem::Theorem32(num(r)?)),
            Some(("thm54", n)) => Ok(Theorem::Theorem54(num(n)?)),
            _ => Err(Error::Parse(format!("unknown theorem {s:?}; expected lemma31, thm32:r, thm45 or thm54:N"))),
        }
    }
}

impl Theorem {
    pub fn trace(self) -> TraceKind {
        match self {
            Theorem::Lemma31 => TraceKind::Lemma31,
            Theorem::Theorem32(r) => TraceKind::Theorem32(r),
            Theorem::Theorem45 => TraceKind::PN { players: 2, with_ab: false },
            Theorem::Theorem54(n) => TraceKind::PN { players: n, with_ab: true },
        }
    }

    pub fn family(self) -> (WeightedFamily, WeightRule) {
        match self {
            Theorem::Lemma31 | Theorem::Theorem32(_) => (WeightedFamily::QmzvBracketMonomials, WeightRule::Exact),
            Theorem::Theorem45 => (WeightedFamily::Family(FamilyTag::QBd), WeightRule::AtMost),
            Theorem::Theorem54(_) => (WeightedFamily::Family(FamilyTag::Bd), WeightRule::AtMost),
        }
    }

    /// `2 * (largest basis) + 10` at the given degree.
    pub fn default_order(self, degree: u32) -> Result<usize> {
        let (family, rule) = self.family();
        let mut largest = 0;
        for w in 0..=degree {
            largest = largest.max(family.basis(w, rule, 0)?.len());
        }
        Ok(default_order(largest))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub degree: u32,
    pub constant_term_one: bool,
    pub membership: MembershipReport,
}

impl TheoremReport {
    pub fn pass(&self) -> bool {
        self.constant_term_one && self.membership.pass()
    }
}

/// Builds the trace of a theorem and checks every coefficient up to total
/// degree `degree` at q-order `order` (default `2 * basis + 10`).
pub fn verify_theorem(theorem: Theorem, degree: u32, order: Option<usize>, budget: Option<u64>) -> Result<TheoremReport> {
    let order = match order {
        Some(n) => n,
        None => theorem.default_order(degree)?,
    };
    let mut spec = TraceSpec::new(theorem.trace(), Truncation::with_default_y(order, degree));
    if let Some(b) = budget {
        spec.budget = b;
    }
    let p = trace_y0(&spec)?;
    let one = QSeries::one(order);
    let constant = p.coeff(&vec![0; p.context().vars.len()]).y0_part();
    let (family, rule) = theorem.family();
    let bound = match theorem {
        Theorem::Theorem54(n) => Some(DegreeBound {
            vars: vec!["a".into(), "b".into()],
            bounded_by: (1..=n).flat_map(|i| [format!("z{i}"), format!("v{i}")]).collect(),
        }),
        _ => None,
    };
    let membership = verify_weighted_membership(&p, family, rule, order, bound.as_ref())?;
    Ok(TheoremReport {
        theorem,
        degree,
        constant_term_one: constant == one,
        membership,
    })
}
