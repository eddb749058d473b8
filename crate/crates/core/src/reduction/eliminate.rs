//! Elimination of a single linear constraint between two strict chains.
//!
//! A term is a pair of strict chains `a`, `b` together with a relation
//! between `sum d` over `a` and over `b`. The rewrite rules are
//!
//! * `=`: solve for the last `d` of the shorter chain, binomially expand,
//!   shift the remaining `n` by the eliminated `n = m`, and sum over `m`
//!   with Faulhaber polynomials; the result carries relation `>`;
//! * `>`: split as `{all} - {=} - {<}`;
//! * `<`: solve for the last `d` of the larger side, introducing a slack
//!   `d` paired with the eliminated `n`, which becomes a new lowest
//!   position of the smaller side; the result carries relation `>`;
//! * no relation: the chains factor into bi-brackets.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::combination::BiBracketCombination;
use super::powers::faulhaber;
use super::spec::{ChainOrdering, ChainSpec, Constraint, Group, SumSpec, DEFAULT_EVAL_BUDGET};
use super::spec::sumspec_eval_budget;
use crate::error::{Error, Result};
use crate::series::poly::UniPoly;
use crate::series::rational::{binomial, factorial, int};
use crate::series::Rational;
use crate::special::BiBracketIndex;

pub const DEFAULT_MAX_DEPTH: usize = 256;

#[derive(Clone, Debug)]
pub struct ReduceOptions {
    pub max_depth: usize,
    /// When set, every rewrite step is checked against the brute-force
    /// evaluation at this q-order.
    pub certify_order: Option<usize>,
    pub eval_budget: u64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { max_depth: DEFAULT_MAX_DEPTH, certify_order: None, eval_budget: DEFAULT_EVAL_BUDGET }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReduceStats {
    pub steps: usize,
    pub certified_steps: usize,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Chain {
    low: u8,
    pos: Vec<(u32, u32)>,
}

impl Chain {
    fn len(&self) -> usize {
        self.pos.len()
    }

    fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    /// `prod u! t! * [t + 1; u]` for `low = 1`.
    fn value(&self) -> (Rational, BiBracketIndex) {
        let mut c = Rational::one();
        for &(u, t) in &self.pos {
            c *= Rational::from_integer(factorial(u) * factorial(t));
        }
        let s = self.pos.iter().map(|&(_, t)| t + 1).collect();
        let r = self.pos.iter().map(|&(u, _)| u).collect();
        (c, BiBracketIndex { s, r })
    }

    fn to_spec(&self, g: Group) -> ChainSpec {
        ChainSpec { start: self.low, ordering: ChainOrdering::Strict, exponents: self.pos.clone(), group: Some(g) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Rel {
    Free,
    Eq,
    /// `sum d over a < sum d over b`
    Lt,
    /// `sum d over a > sum d over b`
    Gt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Term {
    a: Chain,
    b: Chain,
    rel: Rel,
}

impl Term {
    fn from_spec(s: &SumSpec) -> Result<Term> {
        s.validate()?;
        let mut a = None;
        let mut b = None;
        for c in &s.chains {
            if c.ordering != ChainOrdering::Strict && c.len() > 1 {
                return Err(Error::InvalidArgument("elimination needs strict chains; decompose free chains first".into()));
            }
            let slot = match c.group {
                Some(Group::A) => &mut a,
                Some(Group::B) => &mut b,
                None => return Err(Error::InvalidArgument("every chain must belong to group A or B".into())),
            };
            if slot.is_some() {
                return Err(Error::InvalidArgument("at most one chain per group".into()));
            }
            *slot = Some(Chain { low: c.start, pos: c.exponents.clone() });
        }
        let empty = || Chain { low: 1, pos: Vec::new() };
        let (a, b) = (a.unwrap_or_else(empty), b.unwrap_or_else(empty));
        if s.constraint == Constraint::Eq && (a.is_empty() || b.is_empty()) {
            return Err(Error::InvalidArgument("equality constraint needs two nonempty groups".into()));
        }
        let rel = match s.constraint {
            Constraint::None => Rel::Free,
            Constraint::Eq => Rel::Eq,
            Constraint::Lt => Rel::Lt,
            Constraint::Gt => Rel::Gt,
        };
        s.check_bounded()?;
        Ok(Term { a, b, rel })
    }

    fn to_spec(&self) -> SumSpec {
        let chains = [(&self.a, Group::A), (&self.b, Group::B)]
            .into_iter()
            .filter(|(c, _)| !c.is_empty())
            .map(|(c, g)| c.to_spec(g))
            .collect();
        let constraint = match self.rel {
            Rel::Free => Constraint::None,
            Rel::Eq => Constraint::Eq,
            Rel::Lt => Constraint::Lt,
            Rel::Gt => Constraint::Gt,
        };
        SumSpec { chains, constraint }
    }

    fn with(a: Chain, b: Chain, rel: Rel) -> Term {
        Term { a, b, rel }
    }
}

enum Step {
    Leaf(BiBracketCombination),
    Split(Vec<(Rational, Term)>),
}

/// Sparse polynomial in numbered variables.
type MPoly = BTreeMap<Vec<u32>, Rational>;

fn mono(nvars: usize, var: usize, e: u32) -> MPoly {
    let mut m = vec![0; nvars];
    m[var] = e;
    MPoly::from([(m, Rational::one())])
}

fn mpoly_mul(x: &MPoly, y: &MPoly) -> MPoly {
    let mut out = MPoly::new();
    for (ex, cx) in x {
        for (ey, cy) in y {
            let e: Vec<u32> = ex.iter().zip(ey).map(|(a, b)| a + b).collect();
            let slot = out.entry(e).or_insert_with(Rational::zero);
            *slot += cx * cy;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `(sum c_i x_i)^p`.
fn linear_pow(nvars: usize, form: &[(usize, i64)], p: u32) -> MPoly {
    let mut lin = MPoly::new();
    for &(v, c) in form {
        let mut m = vec![0; nvars];
        m[v] = 1;
        *lin.entry(m).or_insert_with(Rational::zero) += int(c);
    }
    let mut acc = MPoly::from([(vec![0; nvars], Rational::one())]);
    for _ in 0..p {
        acc = mpoly_mul(&acc, &lin);
    }
    acc
}

/// `(x + s y)^p`.
fn binomial_pow(nvars: usize, x: usize, y: usize, s: i64, p: u32) -> MPoly {
    let mut out = MPoly::new();
    for j in 0..=p {
        let mut m = vec![0; nvars];
        m[x] += p - j;
        m[y] += j;
        let sign = if s < 0 && j % 2 == 1 { int(-1) } else { int(1) };
        *out.entry(m).or_insert_with(Rational::zero) += Rational::from_integer(binomial(p, j)) * sign;
    }
    out
}

/// Variable layout: positions `0..k` of the kept chain then `k..k+e` of the
/// remaining eliminated chain, `n` at `2i`, `d` at `2i + 1`; `extra`
/// variables follow.
struct Layout {
    k: usize,
    e: usize,
    extra: usize,
}

impl Layout {
    fn nvars(&self) -> usize {
        2 * (self.k + self.e) + self.extra
    }
    fn n(&self, i: usize) -> usize {
        2 * i
    }
    fn d(&self, i: usize) -> usize {
        2 * i + 1
    }
    fn extra(&self, j: usize) -> usize {
        2 * (self.k + self.e) + j
    }
}

/// The common factor after substituting the eliminated position `(m, e)`:
/// kept positions shift `n -> n - m`, remaining eliminated positions shift
/// `n -> n + m`, and `e^{t_e}` is expanded from `e = sum_K d (+ slack) - sum_E' d`.
fn substituted(
    kept: &[(u32, u32)],
    rest: &[(u32, u32)],
    elim: (u32, u32),
    lay: &Layout,
    m: usize,
    slack: Option<usize>,
) -> MPoly {
    let nv = lay.nvars();
    let mut acc = MPoly::from([(vec![0; nv], Rational::one())]);
    for (i, &(u, t)) in kept.iter().enumerate() {
        acc = mpoly_mul(&acc, &binomial_pow(nv, lay.n(i), m, -1, u));
        acc = mpoly_mul(&acc, &mono(nv, lay.d(i), t));
    }
    for (j, &(u, t)) in rest.iter().enumerate() {
        let i = lay.k + j;
        acc = mpoly_mul(&acc, &binomial_pow(nv, lay.n(i), m, 1, u));
        acc = mpoly_mul(&acc, &mono(nv, lay.d(i), t));
    }
    acc = mpoly_mul(&acc, &mono(nv, m, elim.0));
    let mut form: Vec<(usize, i64)> = (0..kept.len()).map(|i| (lay.d(i), 1)).collect();
    form.extend((0..lay.e).map(|j| (lay.d(lay.k + j), -1)));
    if let Some(s) = slack {
        form.push((s, 1));
    }
    mpoly_mul(&acc, &linear_pow(nv, &form, elim.1))
}

fn chain_of(exps: &[u32], lay: &Layout, range: std::ops::Range<usize>, low: u8) -> Chain {
    Chain { low, pos: range.map(|i| (exps[lay.n(i)], exps[lay.d(i)])).collect() }
}

/// `sum_{m = lo}^{M - off} m^c` as a polynomial in `M`.
fn range_power_sum(c: u32, lo: u8, off: u8) -> UniPoly {
    let s = faulhaber(c);
    let upper = s.shift(&int(-(off as i64)));
    let below = s.eval_int(lo as i64 - 1);
    upper.sub(&UniPoly::new(vec![below]))
}

/// Equality: eliminate the last position of `elim`; result `kept > rest`.
fn eliminate_eq(kept: &Chain, elim: &Chain) -> Vec<(Rational, Chain, Chain)> {
    let (last, rest) = elim.pos.split_last().expect("nonempty chain");
    let lay = Layout { k: kept.len(), e: rest.len(), extra: 1 };
    let m = lay.extra(0);
    let poly = substituted(&kept.pos, rest, *last, &lay, m, None);
    let big = lay.n(lay.k - 1);
    let mut summed = MPoly::new();
    for (exps, c) in poly {
        let f = range_power_sum(exps[m], elim.low, kept.low);
        for (j, fj) in f.coeffs().iter().enumerate() {
            if fj.is_zero() {
                continue;
            }
            let mut e = exps.clone();
            e[m] = 0;
            e[big] += j as u32;
            *summed.entry(e).or_insert_with(Rational::zero) += &c * fj;
        }
    }
    let low = (kept.low + elim.low).min(1);
    summed
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (c, chain_of(&e, &lay, 0..lay.k, low), chain_of(&e, &lay, lay.k..lay.k + lay.e, 1)))
        .collect()
}

/// `sum a < sum b`: eliminate the last position of `b`; the slack pairs
/// with the eliminated `n` as a new lowest position of `a`. Result `a' > b'`.
fn eliminate_lt(a: &Chain, b: &Chain) -> Vec<(Rational, Chain, Chain)> {
    let (last, rest) = b.pos.split_last().expect("nonempty chain");
    // kept chain a' = a + (m, slack) occupies positions 0..=|a|
    let lay = Layout { k: a.len() + 1, e: rest.len(), extra: 0 };
    let m = lay.n(a.len());
    let slack = lay.d(a.len());
    let poly = substituted(&a.pos, rest, *last, &lay, m, Some(slack));
    poly.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (c, chain_of(&e, &lay, 0..lay.k, 1), chain_of(&e, &lay, lay.k..lay.k + lay.e, 1)))
        .collect()
}

fn step(t: &Term) -> Result<Step> {
    let one = Rational::one;
    let free = |a: &Chain, b: &Chain| Term::with(a.clone(), b.clone(), Rel::Free);
    Ok(match t.rel {
        Rel::Free => {
            if (t.a.low == 0 && !t.a.is_empty()) || (t.b.low == 0 && !t.b.is_empty()) {
                return Err(Error::Unbounded("unconstrained chain starting at n = 0".into()));
            }
            let (ca, ia) = t.a.value();
            let (cb, ib) = t.b.value();
            Step::Leaf(BiBracketCombination::single(ia, Some(ib), ca * cb))
        }
        Rel::Eq => match (t.a.is_empty(), t.b.is_empty()) {
            (true, true) => Step::Split(vec![(one(), free(&t.a, &t.b))]),
            (true, false) | (false, true) => Step::Leaf(BiBracketCombination::zero()),
            _ => {
                if t.a.low == 0 && t.b.low == 0 {
                    return Err(Error::Unbounded("both groups start at n = 0".into()));
                }
                let (kept, elim) = if t.a.len() < t.b.len() { (&t.b, &t.a) } else { (&t.a, &t.b) };
                Step::Split(eliminate_eq(kept, elim).into_iter().map(|(c, k, r)| (c, Term::with(k, r, Rel::Gt))).collect())
            }
        },
        Rel::Gt | Rel::Lt => {
            // normalize to small < large
            let (small, large) = if t.rel == Rel::Lt { (&t.a, &t.b) } else { (&t.b, &t.a) };
            if large.is_empty() {
                return Ok(Step::Leaf(BiBracketCombination::zero()));
            }
            if small.is_empty() {
                return Ok(Step::Split(vec![(one(), free(&t.a, &t.b))]));
            }
            if t.a.low == 0 || t.b.low == 0 {
                return Err(Error::InvalidArgument("inequality elimination needs chains starting at n >= 1".into()));
            }
            if t.rel == Rel::Gt {
                let (a, b) = (&t.a, &t.b);
                Step::Split(vec![
                    (one(), free(a, b)),
                    (-one(), Term::with(a.clone(), b.clone(), Rel::Eq)),
                    (-one(), Term::with(a.clone(), b.clone(), Rel::Lt)),
                ])
            } else {
                Step::Split(eliminate_lt(small, large).into_iter().map(|(c, a, b)| (c, Term::with(a, b, Rel::Gt))).collect())
            }
        }
    })
}

struct Reducer<'o> {
    opts: &'o ReduceOptions,
    memo: HashMap<Term, BiBracketCombination>,
    stats: ReduceStats,
}

impl Reducer<'_> {
    fn eval(&self, t: &Term, order: usize) -> Result<crate::series::QSeries> {
        sumspec_eval_budget(&t.to_spec(), order, self.opts.eval_budget)
    }

    fn reduce(&mut self, t: &Term, depth: usize) -> Result<BiBracketCombination> {
        if depth > self.opts.max_depth {
            return Err(Error::RecursionDepth(self.opts.max_depth));
        }
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if let Some(c) = self.memo.get(t) {
            return Ok(c.clone());
        }
        self.stats.steps += 1;
        let out = match step(t)? {
            Step::Leaf(c) => {
                if let Some(n) = self.opts.certify_order {
                    self.certify(t, &c.evaluate(n), n)?;
                }
                c
            }
            Step::Split(children) => {
                if let Some(n) = self.opts.certify_order {
                    let mut rhs = crate::series::QSeries::zero(n);
                    for (c, child) in &children {
                        rhs.add_assign_ref(&self.eval(child, n)?.scale(c));
                    }
                    self.certify(t, &rhs, n)?;
                }
                let mut acc = BiBracketCombination::zero();
                for (c, child) in &children {
                    let sub = self.reduce(child, depth + 1)?;
                    acc.add_scaled(&sub, c);
                }
                acc
            }
        };
        self.memo.insert(t.clone(), out.clone());
        Ok(out)
    }

    fn certify(&mut self, t: &Term, rhs: &crate::series::QSeries, n: usize) -> Result<()> {
        let lhs = self.eval(t, n)?;
        if &lhs != rhs {
            return Err(Error::InvalidArgument(format!(
                "rewrite step failed certification at q-order {n}: {}",
                t.to_spec()
            )));
        }
        self.stats.certified_steps += 1;
        Ok(())
    }
}

/// Expresses a two-group sum of strict chains as a combination of
/// bi-brackets and products of two bi-brackets.
pub fn eliminate(s: &SumSpec) -> Result<BiBracketCombination> {
    eliminate_with(s, &ReduceOptions::default()).map(|(c, _)| c)
}

pub fn eliminate_with(s: &SumSpec, opts: &ReduceOptions) -> Result<(BiBracketCombination, ReduceStats)> {
    let t = Term::from_spec(s)?;
    let mut r = Reducer { opts, memo: HashMap::new(), stats: ReduceStats::default() };
    let c = r.reduce(&t, 0)?;
    Ok((c, r.stats))
}

/// Decomposes free chains, then eliminates every resulting strict sum.
pub fn reduce_spec(s: &SumSpec, opts: &ReduceOptions) -> Result<(BiBracketCombination, ReduceStats)> {
    let mut acc = BiBracketCombination::zero();
    let mut stats = ReduceStats::default();
    for (c, piece) in super::order_decompose(s)? {
        let (comb, st) = eliminate_with(&piece, opts)?;
        acc.add_scaled(&comb, &c);
        stats.steps += st.steps;
        stats.certified_steps += st.certified_steps;
        stats.max_depth = stats.max_depth.max(st.max_depth);
    }
    Ok((acc, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::sumspec_eval;

    #[test]
    fn range_sums() {
        // sum_{m=0}^{M} m^0 = M + 1
        assert_eq!(range_power_sum(0, 0, 0), UniPoly::from_ints(&[1, 1]));
        // sum_{m=1}^{M-1} m = M(M-1)/2
        let p = range_power_sum(1, 1, 1);
        assert_eq!(p.eval_int(4), int(6));
        assert_eq!(p.eval_int(1), int(0));
    }

    #[test]
    fn w_one_one_quadratic() {
        let s = SumSpec::w_form(vec![(0, 1)], vec![(0, 1)]).unwrap();
        let opts = ReduceOptions { certify_order: Some(10), ..Default::default() };
        let (c, stats) = eliminate_with(&s, &opts).unwrap();
        assert_eq!(c, BiBracketCombination::single("[3;1]".parse().unwrap(), None, int(2)));
        assert_eq!(stats.certified_steps, stats.steps);
        assert_eq!(c.evaluate(12), sumspec_eval(&s, 12).unwrap());
    }

    #[test]
    fn inequality_inputs() {
        for constraint in [Constraint::Lt, Constraint::Gt, Constraint::None] {
            let s = SumSpec::new(
                vec![ChainSpec::strict(1, vec![(1, 1), (0, 2)], Some(Group::A)), ChainSpec::strict(1, vec![(0, 1)], Some(Group::B))],
                constraint,
            )
            .unwrap();
            let opts = ReduceOptions { certify_order: Some(9), ..Default::default() };
            let (c, _) = eliminate_with(&s, &opts).unwrap();
            assert_eq!(c.evaluate(12), sumspec_eval(&s, 12).unwrap(), "{constraint:?}");
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let empty_b = SumSpec::new(vec![ChainSpec::strict(0, vec![(0, 0)], Some(Group::A))], Constraint::Eq).unwrap();
        assert!(eliminate(&empty_b).is_err());
        let ungrouped = SumSpec::new(vec![ChainSpec::strict(1, vec![(0, 0)], None)], Constraint::None).unwrap();
        assert!(eliminate(&ungrouped).is_err());
    }
}
