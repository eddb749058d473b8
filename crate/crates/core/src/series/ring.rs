//! Polynomials in formal variables with Laurent-in-`y` coefficients over
//! truncated q-series.
//!
//! An element is a sparse map from formal exponent vectors to a sparse map
//! from y-exponent vectors to dense [`QSeries`]. Every element carries its
//! truncation triple: q-order `N`, formal degree bound `D` and y-exponent
//! bound `Y`. Only *graded* formal variables count towards `D`; ungraded
//! ones (the exponents `a`, `b` of a Pochhammer power) are bounded by
//! construction.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::qseries::QSeries;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

pub type Mono = Vec<u32>;
pub type YExp = Vec<i32>;
pub type YMap = BTreeMap<YExp, QSeries>;

/// Per-y-exponent cap on useful q-degrees: `None` drops the y-exponent,
/// `Some(k)` zeroes every coefficient above `q^k`. Used when the caller can
/// prove that the dropped terms never contribute to the quantity of interest.
pub type YLimit<'a> = &'a dyn Fn(&[i32]) -> Option<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalVar {
    pub name: String,
    pub graded: bool,
}

/// Declared variables of an element, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Context {
    pub vars: Vec<FormalVar>,
    pub y_vars: Vec<String>,
}

impl Context {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn y_index(&self, name: &str) -> Option<usize> {
        self.y_vars.iter().position(|v| v == name)
    }

    pub fn graded_degree(&self, mono: &[u32]) -> u32 {
        mono.iter().zip(&self.vars).filter(|(_, v)| v.graded).map(|(e, _)| *e).sum()
    }

    /// Union of two contexts, keeping `self`'s order and appending new names
    /// from `other`; also returns index maps for both inputs.
    fn union(&self, other: &Context) -> (Context, Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>) {
        let mut ctx = self.clone();
        let va: Vec<usize> = (0..self.vars.len()).collect();
        let ya: Vec<usize> = (0..self.y_vars.len()).collect();
        let mut vb = Vec::with_capacity(other.vars.len());
        for v in &other.vars {
            match ctx.var_index(&v.name) {
                Some(i) => vb.push(i),
                None => {
                    ctx.vars.push(v.clone());
                    vb.push(ctx.vars.len() - 1);
                }
            }
        }
        let mut yb = Vec::with_capacity(other.y_vars.len());
        for y in &other.y_vars {
            match ctx.y_index(y) {
                Some(i) => yb.push(i),
                None => {
                    ctx.y_vars.push(y.clone());
                    yb.push(ctx.y_vars.len() - 1);
                }
            }
        }
        (ctx, va, vb, ya, yb)
    }

    pub fn format_mono(&self, mono: &[u32]) -> String {
        let parts: Vec<String> = mono
            .iter()
            .zip(&self.vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| if *e == 1 { v.name.clone() } else { format!("{}^{}", v.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format_yexp(&self, e: &[i32]) -> String {
        let parts: Vec<String> = e
            .iter()
            .zip(&self.y_vars)
            .filter(|(k, _)| **k != 0)
            .map(|(k, y)| if *k == 1 { y.clone() } else { format!("{y}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Parses `z1^2*w1` (or `1`) into an exponent vector.
    pub fn parse_mono(&self, s: &str) -> Result<Mono> {
        let mut mono = vec![0u32; self.vars.len()];
        for (name, e) in parse_product(s)? {
            let i = self
                .var_index(&name)
                .ok_or_else(|| Error::Parse(format!("unknown formal variable {name:?}")))?;
            if e < 0 {
                return Err(Error::Parse(format!("negative exponent on formal variable {name:?}")));
            }
            mono[i] += e as u32;
        }
        Ok(mono)
    }

    /// Parses `y1^2*y2^-2` (or `1`) into a y-exponent vector.
    pub fn parse_yexp(&self, s: &str) -> Result<YExp> {
        let mut e = vec![0i32; self.y_vars.len()];
        for (name, k) in parse_product(s)? {
            let i = self
                .y_index(&name)
                .ok_or_else(|| Error::Parse(format!("unknown y-variable {name:?}")))?;
            e[i] += k;
        }
        Ok(e)
    }
}

fn parse_product(s: &str) -> Result<Vec<(String, i32)>> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('*')
        .map(|f| {
            let f = f.trim();
            match f.split_once('^') {
                Some((n, e)) => {
                    let e: i32 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?;
                    Ok((n.trim().to_string(), e))
                }
                None => Ok((f.to_string(), 1)),
            }
        })
        .collect()
}

/// The truncation triple `(N, D, Y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub order: usize,
    pub degree: u32,
    pub ybound: u32,
}

impl Truncation {
    pub fn new(order: usize, degree: u32, ybound: u32) -> Self {
        Truncation { order, degree, ybound }
    }

    /// Default y-bound equal to the q-order.
    pub fn with_default_y(order: usize, degree: u32) -> Self {
        Truncation { order, degree, ybound: order as u32 }
    }

    pub fn min(self, other: Truncation) -> Truncation {
        Truncation {
            order: self.order.min(other.order),
            degree: self.degree.min(other.degree),
            ybound: self.ybound.min(other.ybound),
        }
    }
}

/// The y-exponent layer of a single formal coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YLayer {
    pub y_vars: Vec<String>,
    pub order: usize,
    pub ybound: u32,
    pub terms: YMap,
    pub saturated: bool,
}

impl YLayer {
    /// The exponent-zero entry, or the zero series.
    pub fn y0_part(&self) -> QSeries {
        let zero = vec![0; self.y_vars.len()];
        self.terms.get(&zero).cloned().unwrap_or_else(|| QSeries::zero(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(QSeries::is_zero)
    }
}

/// Factory for elements sharing a context and truncation.
#[derive(Clone, Debug)]
pub struct Ring {
    ctx: Arc<Context>,
    trunc: Truncation,
}

impl Ring {
    /// `graded` and `ungraded` formal variables (in that order), then the
    /// Laurent variables.
    pub fn new(graded: &[&str], ungraded: &[&str], y_vars: &[&str], trunc: Truncation) -> Self {
        let mut vars: Vec<FormalVar> =
            graded.iter().map(|n| FormalVar { name: n.to_string(), graded: true }).collect();
        vars.extend(ungraded.iter().map(|n| FormalVar { name: n.to_string(), graded: false }));
        let ctx = Context { vars, y_vars: y_vars.iter().map(|s| s.to_string()).collect() };
        Ring { ctx: Arc::new(ctx), trunc }
    }

    pub fn from_context(ctx: Context, trunc: Truncation) -> Self {
        Ring { ctx: Arc::new(ctx), trunc }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            ctx: self.ctx.clone(),
            trunc: self.trunc,
            terms: BTreeMap::new(),
            saturated: false,
            degree_truncated: false,
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_series(QSeries::one(self.trunc.order))
    }

    pub fn constant(&self, c: Rational) -> RingElement {
        self.from_series(QSeries::constant(c, self.trunc.order))
    }

    pub fn from_series(&self, s: QSeries) -> RingElement {
        let mono = vec![0; self.ctx.vars.len()];
        let y = vec![0; self.ctx.y_vars.len()];
        self.term(mono, y, s)
    }

    /// A single term; dropped (with the matching flag set) if it violates
    /// the truncation.
    pub fn term(&self, mono: Mono, yexp: YExp, s: QSeries) -> RingElement {
        let mut out = self.zero();
        assert_eq!(mono.len(), self.ctx.vars.len(), "monomial arity");
        assert_eq!(yexp.len(), self.ctx.y_vars.len(), "y-exponent arity");
        if self.ctx.graded_degree(&mono) > self.trunc.degree {
            out.degree_truncated = true;
            return out;
        }
        if yexp.iter().any(|e| e.unsigned_abs() > self.trunc.ybound) {
            out.saturated = true;
            return out;
        }
        let s = s.truncate(self.trunc.order);
        if !s.is_zero() {
            out.terms.entry(mono).or_default().insert(yexp, s);
        }
        out
    }

    pub fn var(&self, name: &str) -> Result<RingElement> {
        let i = self
            .ctx
            .var_index(name)
            .ok_or_else(|| Error::InvalidArgument(format!("undeclared variable {name:?}")))?;
        let mut mono = vec![0; self.ctx.vars.len()];
        mono[i] = 1;
        Ok(self.term(mono, vec![0; self.ctx.y_vars.len()], QSeries::one(self.trunc.order)))
    }

    /// `y^e * q^k` for a y-exponent vector `e`.
    pub fn y_monomial(&self, e: &[i32], qpow: usize) -> RingElement {
        self.term(
            vec![0; self.ctx.vars.len()],
            e.to_vec(),
            QSeries::monomial(qpow, Rational::one(), self.trunc.order),
        )
    }

    /// `exp(sum_v c_v * v)` truncated at the degree bound, where the linear
    /// form is given as (variable, integer coefficient) pairs.
    pub fn exp_linear(&self, form: &[(String, i64)]) -> Result<RingElement> {
        let mut acc = self.one();
        for (name, c) in form {
            if *c == 0 {
                continue;
            }
            let i = self
                .ctx
                .var_index(name)
                .ok_or_else(|| Error::InvalidArgument(format!("undeclared variable {name:?}")))?;
            // exp(c v) = sum_k c^k v^k / k!
            if !self.ctx.vars[i].graded {
                return Err(Error::InvalidArgument(format!("exp of ungraded variable {name:?} does not truncate")));
            }
            let mut e = self.zero();
            let mut coef = Rational::one();
            for k in 0..=self.trunc.degree {
                if k > 0 {
                    coef = coef * int(*c) / int(k as i64);
                }
                let mut mono = vec![0; self.ctx.vars.len()];
                mono[i] = k;
                e = e.add(&self.term(
                    mono,
                    vec![0; self.ctx.y_vars.len()],
                    QSeries::constant(coef.clone(), self.trunc.order),
                ));
            }
            acc = acc.mul(&e);
        }
        Ok(acc)
    }
}

/// An element of the truncated formal ring.
#[derive(Clone, Debug)]
pub struct RingElement {
    ctx: Arc<Context>,
    trunc: Truncation,
    terms: BTreeMap<Mono, YMap>,
    saturated: bool,
    degree_truncated: bool,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.trunc == other.trunc && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl RingElement {
    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn ring(&self) -> Ring {
        Ring { ctx: self.ctx.clone(), trunc: self.trunc }
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// True if a y-exponent outside the bound was dropped at some point.
    pub fn saturated(&self) -> bool {
        self.saturated
    }

    /// True if a product term beyond the degree bound was dropped.
    pub fn degree_truncated(&self) -> bool {
        self.degree_truncated
    }

    pub fn terms(&self) -> &BTreeMap<Mono, YMap> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.values().map(BTreeMap::len).sum()
    }

    fn canonicalize(&mut self) {
        for layer in self.terms.values_mut() {
            layer.retain(|_, s| !s.is_zero());
        }
        self.terms.retain(|_, l| !l.is_empty());
    }

    fn remap(&self, ctx: &Context, vmap: &[usize], ymap: &[usize]) -> BTreeMap<Mono, YMap> {
        if vmap.len() == ctx.vars.len()
            && ymap.len() == ctx.y_vars.len()
            && vmap.iter().enumerate().all(|(i, &j)| i == j)
            && ymap.iter().enumerate().all(|(i, &j)| i == j)
        {
            return self.terms.clone();
        }
        let mut out = BTreeMap::new();
        for (m, layer) in &self.terms {
            let mut nm = vec![0u32; ctx.vars.len()];
            for (i, &e) in m.iter().enumerate() {
                nm[vmap[i]] = e;
            }
            let mut nl = YMap::new();
            for (y, s) in layer {
                let mut ny = vec![0i32; ctx.y_vars.len()];
                for (i, &e) in y.iter().enumerate() {
                    ny[ymap[i]] = e;
                }
                nl.insert(ny, s.clone());
            }
            out.insert(nm, nl);
        }
        out
    }

    /// Brings two elements to a common context and truncation.
    #[allow(clippy::type_complexity)]
    fn aligned<'a>(
        &'a self,
        other: &'a RingElement,
    ) -> (Arc<Context>, Truncation, Cow<'a, BTreeMap<Mono, YMap>>, Cow<'a, BTreeMap<Mono, YMap>>) {
        let trunc = self.trunc.min(other.trunc);
        if Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx {
            return (self.ctx.clone(), trunc, Cow::Borrowed(&self.terms), Cow::Borrowed(&other.terms));
        }
        let (ctx, va, vb, ya, yb) = self.ctx.union(&other.ctx);
        let a = self.remap(&ctx, &va, &ya);
        let b = other.remap(&ctx, &vb, &yb);
        (Arc::new(ctx), trunc, Cow::Owned(a), Cow::Owned(b))
    }

    /// Drops terms outside a (possibly tighter) truncation.
    fn enforce(&mut self) {
        let t = self.trunc;
        let ctx = self.ctx.clone();
        let mut deg_cut = false;
        let mut sat = false;
        self.terms.retain(|m, _| {
            let keep = ctx.graded_degree(m) <= t.degree;
            deg_cut |= !keep;
            keep
        });
        for layer in self.terms.values_mut() {
            layer.retain(|y, _| {
                let keep = y.iter().all(|e| e.unsigned_abs() <= t.ybound);
                sat |= !keep;
                keep
            });
            for s in layer.values_mut() {
                if s.order() > t.order {
                    *s = s.truncate(t.order);
                }
            }
        }
        self.degree_truncated |= deg_cut;
        self.saturated |= sat;
        self.canonicalize();
    }

    fn combine(&self, other: &RingElement, sign: i32) -> RingElement {
        let (ctx, trunc, a, b) = self.aligned(other);
        let mut a = a.into_owned();
        for (m, lb) in b.into_owned() {
            let la = a.entry(m).or_default();
            for (y, sb) in lb {
                match la.get_mut(&y) {
                    Some(sa) => {
                        if sign > 0 {
                            sa.add_assign_ref(&sb)
                        } else {
                            sa.sub_assign_ref(&sb)
                        }
                    }
                    None => {
                        la.insert(y, if sign > 0 { sb } else { -&sb });
                    }
                }
            }
        }
        let mut out = RingElement {
            ctx,
            trunc,
            terms: a,
            saturated: self.saturated || other.saturated,
            degree_truncated: self.degree_truncated || other.degree_truncated,
        };
        out.enforce();
        out
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> RingElement {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> RingElement {
        let mut out = self.clone();
        for layer in out.terms.values_mut() {
            for s in layer.values_mut() {
                *s = s.scale(c);
            }
        }
        out.canonicalize();
        out
    }

    /// Multiplies every coefficient by a q-series.
    pub fn mul_series(&self, s: &QSeries) -> RingElement {
        let mut out = self.clone();
        out.trunc.order = out.trunc.order.min(s.order());
        for layer in out.terms.values_mut() {
            for c in layer.values_mut() {
                *c = &*c * s;
            }
        }
        out.canonicalize();
        out
    }

    /// Product truncated by degree, y-bound and q-order.
    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.mul_filtered(other, false, None)
    }

    /// Product with the y-exponent limit applied to the result. Dropped
    /// terms do not set the saturation flag.
    pub fn mul_limited(&self, other: &RingElement, limit: YLimit<'_>) -> RingElement {
        self.mul_filtered(other, false, Some(limit))
    }

    /// Applies a y-exponent limit to the stored terms.
    pub fn limited(&self, limit: YLimit<'_>) -> RingElement {
        let mut out = self.clone();
        for layer in out.terms.values_mut() {
            apply_limit(layer, limit);
        }
        out.canonicalize();
        out
    }

    /// Product keeping only terms with all-zero y-exponent. The result has
    /// no y-variables.
    pub fn mul_y0(&self, other: &RingElement) -> Result<RingElement> {
        for e in [self, other] {
            if e.saturated && e.trunc.ybound < e.trunc.order as u32 {
                return Err(Error::Saturated { ybound: e.trunc.ybound, order: e.trunc.order });
            }
        }
        Ok(self.mul_filtered(other, true, None))
    }

    fn mul_filtered(&self, other: &RingElement, y0_only: bool, limit: Option<YLimit<'_>>) -> RingElement {
        let (ctx, trunc, a, b) = self.aligned(other);
        let mut acc: BTreeMap<Mono, YMap> = BTreeMap::new();
        let mut deg_cut = false;
        let mut sat = false;
        let ny = ctx.y_vars.len();
        let mut neg_lookup: Vec<i32> = vec![0; ny];
        for (ma, la) in a.iter() {
            let da = ctx.graded_degree(ma);
            for (mb, lb) in b.iter() {
                if da + ctx.graded_degree(mb) > trunc.degree {
                    deg_cut = true;
                    continue;
                }
                let m: Mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let mut local: YMap = YMap::new();
                if y0_only {
                    let mut s = QSeries::zero(trunc.order);
                    let mut any = false;
                    for (ya, sa) in la {
                        for (k, e) in ya.iter().enumerate() {
                            neg_lookup[k] = -e;
                        }
                        if let Some(sb) = lb.get(&neg_lookup) {
                            s.add_mul_assign(sa, sb);
                            any = true;
                        }
                    }
                    if any {
                        local.insert(Vec::new(), s);
                    }
                } else {
                    for (ya, sa) in la {
                        let Some(va) = sa.valuation() else { continue };
                        for (yb, sb) in lb {
                            if sb.valuation().is_none_or(|vb| va + vb > trunc.order) {
                                continue;
                            }
                            let y: YExp = ya.iter().zip(yb).map(|(x, z)| x + z).collect();
                            if limit.is_some_and(|l| l(&y).is_none()) {
                                continue;
                            }
                            if y.iter().any(|e| e.unsigned_abs() > trunc.ybound) {
                                sat = true;
                                continue;
                            }
                            local
                                .entry(y)
                                .or_insert_with(|| QSeries::zero(trunc.order))
                                .add_mul_assign(sa, sb);
                        }
                    }
                }
                if let Some(limit) = limit {
                    apply_limit(&mut local, limit);
                }
                let slot = acc.entry(m).or_default();
                for (y, s) in local {
                    match slot.get_mut(&y) {
                        Some(t) => t.add_assign_ref(&s),
                        None => {
                            slot.insert(y, s);
                        }
                    }
                }
            }
        }
        let mut ctx = ctx;
        if y0_only {
            let mut c = (*ctx).clone();
            c.y_vars.clear();
            ctx = Arc::new(c);
        }
        let mut out = RingElement {
            ctx,
            trunc,
            terms: acc,
            saturated: sat || self.saturated || other.saturated,
            degree_truncated: deg_cut || self.degree_truncated || other.degree_truncated,
        };
        if y0_only {
            out.saturated = false;
        }
        out.canonicalize();
        out
    }

    pub fn pow(&self, k: u32) -> RingElement {
        let mut acc = self.ring().one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient of `q^0 y^0` in the formal-degree-0 part.
    pub fn constant_coeff(&self) -> Rational {
        let m = vec![0; self.ctx.vars.len()];
        let y = vec![0; self.ctx.y_vars.len()];
        self.terms
            .get(&m)
            .and_then(|l| l.get(&y))
            .map(|s| s.coeff(0))
            .unwrap_or_else(Rational::zero)
    }

    /// Exact coefficient of a formal monomial.
    pub fn coeff(&self, mono: &[u32]) -> YLayer {
        YLayer {
            y_vars: self.ctx.y_vars.clone(),
            order: self.trunc.order,
            ybound: self.trunc.ybound,
            terms: self.terms.get(mono).cloned().unwrap_or_default(),
            saturated: self.saturated,
        }
    }

    /// Coefficient of a monomial written as `z^2*w`.
    pub fn coeff_str(&self, mono: &str) -> Result<YLayer> {
        let m = self.ctx.parse_mono(mono)?;
        Ok(self.coeff(&m))
    }

    /// The y-free q-series coefficient of a monomial written as `z^2*w`.
    pub fn series_coeff(&self, mono: &str) -> Result<QSeries> {
        Ok(self.coeff_str(mono)?.y0_part())
    }

    /// Keeps only the all-zero y-exponent terms and drops the y-variables.
    ///
    /// Refuses when y-exponents were dropped with a bound below the q-order,
    /// because those could have contributed.
    pub fn y0_coefficient(&self) -> Result<RingElement> {
        if self.saturated && self.trunc.ybound < self.trunc.order as u32 {
            return Err(Error::Saturated { ybound: self.trunc.ybound, order: self.trunc.order });
        }
        let zero = vec![0; self.ctx.y_vars.len()];
        let mut terms = BTreeMap::new();
        for (m, layer) in &self.terms {
            if let Some(s) = layer.get(&zero) {
                let mut l = YMap::new();
                l.insert(Vec::new(), s.clone());
                terms.insert(m.clone(), l);
            }
        }
        let mut ctx = (*self.ctx).clone();
        ctx.y_vars.clear();
        let mut out = RingElement {
            ctx: Arc::new(ctx),
            trunc: self.trunc,
            terms,
            saturated: false,
            degree_truncated: self.degree_truncated,
        };
        out.canonicalize();
        Ok(out)
    }

    /// Sets the named formal variables to zero and removes them from the
    /// context.
    pub fn set_zero(&self, names: &[&str]) -> RingElement {
        let drop: Vec<bool> = self.ctx.vars.iter().map(|v| names.contains(&v.name.as_str())).collect();
        let mut ctx = (*self.ctx).clone();
        ctx.vars = ctx.vars.into_iter().zip(&drop).filter(|(_, d)| !**d).map(|(v, _)| v).collect();
        let mut terms = BTreeMap::new();
        for (m, l) in &self.terms {
            if m.iter().zip(&drop).any(|(e, d)| *d && *e > 0) {
                continue;
            }
            let nm: Mono = m.iter().zip(&drop).filter(|(_, d)| !**d).map(|(e, _)| *e).collect();
            terms.insert(nm, l.clone());
        }
        RingElement {
            ctx: Arc::new(ctx),
            trunc: self.trunc,
            terms,
            saturated: self.saturated,
            degree_truncated: self.degree_truncated,
        }
    }

    /// Replaces the y-bound of an element that has no y-variables, where the
    /// bound carries no information.
    pub fn with_ybound(&self, ybound: u32) -> Result<RingElement> {
        if !self.ctx.y_vars.is_empty() {
            return Err(Error::InvalidArgument("y-bound can only be reset on y-free elements".into()));
        }
        let mut out = self.clone();
        out.trunc.ybound = ybound;
        Ok(out)
    }

    /// Lowers the truncation; never raises it.
    pub fn truncate(&self, trunc: Truncation) -> RingElement {
        let mut out = self.clone();
        out.trunc = self.trunc.min(trunc);
        out.enforce();
        out
    }

    /// Re-declares the element over a larger context with the same names
    /// (used to compare elements built over different variable orders).
    pub fn in_context(&self, ctx: &Context) -> Result<RingElement> {
        let mut vmap = Vec::new();
        for v in &self.ctx.vars {
            vmap.push(ctx.var_index(&v.name).ok_or_else(|| {
                Error::InvalidArgument(format!("variable {:?} missing from target context", v.name))
            })?);
        }
        let mut ymap = Vec::new();
        for y in &self.ctx.y_vars {
            ymap.push(ctx.y_index(y).ok_or_else(|| {
                Error::InvalidArgument(format!("y-variable {y:?} missing from target context"))
            })?);
        }
        Ok(RingElement {
            ctx: Arc::new(ctx.clone()),
            trunc: self.trunc,
            terms: self.remap(ctx, &vmap, &ymap),
            saturated: self.saturated,
            degree_truncated: self.degree_truncated,
        })
    }

    /// `exp(self)` as the truncated power series `sum_k self^k / k!`.
    ///
    /// The input must have zero `q^0 y^0` constant in its formal-degree-0
    /// part; the powers must eventually vanish under the truncation.
    pub fn exp_truncated(&self) -> Result<RingElement> {
        self.exp_impl(None)
    }

    /// [`exp_truncated`](Self::exp_truncated) with a y-exponent limit
    /// applied after every multiplication.
    pub fn exp_limited(&self, limit: YLimit<'_>) -> Result<RingElement> {
        self.exp_impl(Some(limit))
    }

    fn exp_impl(&self, limit: Option<YLimit<'_>>) -> Result<RingElement> {
        if !self.constant_coeff().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let t = self.trunc;
        let cap = t.degree as usize + 2 * t.order + 2 * t.ybound as usize + 2;
        let mut sum = self.ring().one();
        let mut term = self.ring().one();
        for k in 1..=cap {
            term = term.mul_filtered(self, false, limit).scale(&Rational::new(1.into(), (k as i64).into()));
            if term.is_zero() {
                sum.saturated |= term.saturated;
                sum.degree_truncated |= term.degree_truncated;
                return Ok(sum);
            }
            sum = sum.add(&term);
        }
        Err(Error::NonConvergent(cap))
    }

    /// `1 / self` as `c^{-1} sum_k (1 - self/c)^k`, where `c` is the
    /// constant coefficient.
    pub fn inverse(&self) -> Result<RingElement> {
        let c = self.constant_coeff();
        if c.is_zero() {
            return Err(Error::NotUnit("zero constant term".into()));
        }
        let cinv = c.recip();
        let t = self.ring().one().sub(&self.scale(&cinv));
        let cap = self.trunc.degree as usize + 2 * self.trunc.order + 2 * self.trunc.ybound as usize + 2;
        let mut sum = self.ring().one();
        let mut pw = self.ring().one();
        for _ in 0..cap {
            pw = pw.mul(&t);
            if pw.is_zero() {
                sum.saturated |= pw.saturated;
                return Ok(sum.scale(&cinv));
            }
            sum = sum.add(&pw);
        }
        Err(Error::NotUnit(format!("geometric series did not terminate after {cap} terms")))
    }

    /// Sum of exponents of the named variables in a monomial.
    pub fn degree_in(&self, mono: &[u32], names: &[&str]) -> u32 {
        mono.iter()
            .zip(&self.ctx.vars)
            .filter(|(_, v)| names.contains(&v.name.as_str()))
            .map(|(e, _)| *e)
            .sum()
    }

    pub fn graded_degree(&self, mono: &[u32]) -> u32 {
        self.ctx.graded_degree(mono)
    }
}

fn apply_limit(layer: &mut YMap, limit: YLimit<'_>) {
    layer.retain(|y, s| match limit(y) {
        None => false,
        Some(k) => {
            for i in k + 1..=s.order() {
                s.set_coeff(i, Rational::zero());
            }
            true
        }
    });
}

/// `sum_{k_1 + 2 k_2 + ... = m} prod_t (f_t / t!)^{k_t} / k_t!`, the
/// coefficient of `z^m` in `exp(f)` given `f_derivs[t-1] = f^{(t)}(0)`.
pub fn bell_coefficient(f_derivs: &[RingElement], m: usize) -> Result<RingElement> {
    if m == 0 {
        return Err(Error::InvalidArgument("bell coefficient index must be positive".into()));
    }
    if f_derivs.len() < m {
        return Err(Error::InvalidArgument(format!(
            "need {m} derivatives, got {}",
            f_derivs.len()
        )));
    }
    let ring = f_derivs[0].ring();
    let scaled: Vec<RingElement> = f_derivs[..m]
        .iter()
        .enumerate()
        .map(|(i, f)| f.scale(&Rational::new(1.into(), super::rational::factorial(i as u32 + 1))))
        .collect();
    let mut total = ring.zero();
    for parts in partitions(m) {
        // parts[t-1] = k_t
        let mut term = ring.one();
        let mut denom = num_bigint::BigInt::one();
        for (i, &k) in parts.iter().enumerate() {
            if k > 0 {
                term = term.mul(&scaled[i].pow(k));
                denom *= super::rational::factorial(k);
            }
        }
        total = total.add(&term.scale(&Rational::new(1.into(), denom)));
    }
    Ok(total)
}

/// All multiplicity vectors `(k_1, ..., k_m)` with `sum t k_t = m`.
fn partitions(m: usize) -> Vec<Vec<u32>> {
    fn go(t: usize, rest: usize, m: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if t > m {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=rest / t {
            cur.push(k as u32);
            go(t + 1, rest - k * t, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, m, m, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, layer) in &self.terms {
            for (y, s) in layer {
                if !first {
                    writeln!(f)?;
                }
                first = false;
                write!(f, "[{} | {}] {}", self.ctx.format_mono(m), self.ctx.format_yexp(y), s)?;
            }
        }
        Ok(())
    }
}
