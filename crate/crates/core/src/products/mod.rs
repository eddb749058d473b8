//! Infinite q-Pochhammer products with exponential-variable arguments.
//!
//! A factor `(e^L y^e q^c; q)_inf^p` is never expanded through a symbolic
//! substitution `x = e^z`: the argument is kept as a linear form `L` in the
//! formal variables and `e^{kL}` is expanded directly up to the degree
//! bound.

mod trace;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{QSeries, Rational, Ring, RingElement, YLimit};

pub use trace::{build_trace, estimate_terms, trace_factors, trace_y0, TraceKind, TraceSpec, TraceVars};

/// Integer linear combination of formal variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinearForm(BTreeMap<String, i64>);

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Self::from_pairs([(name, 1)])
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut f = LinearForm::zero();
        for (n, c) in pairs {
            *f.0.entry(n.to_string()).or_insert(0) += c;
        }
        f.0.retain(|_, c| *c != 0);
        f
    }

    pub fn add(&self, other: &LinearForm) -> LinearForm {
        let mut f = self.clone();
        for (n, c) in &other.0 {
            *f.0.entry(n.clone()).or_insert(0) += c;
        }
        f.0.retain(|_, c| *c != 0);
        f
    }

    pub fn scale(&self, k: i64) -> LinearForm {
        let mut f = LinearForm(self.0.iter().map(|(n, c)| (n.clone(), c * k)).collect());
        f.0.retain(|_, c| *c != 0);
        f
    }

    pub fn sub(&self, other: &LinearForm) -> LinearForm {
        self.add(&other.scale(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, name: &str) -> i64 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn pairs(&self) -> Vec<(String, i64)> {
        self.0.iter().map(|(n, c)| (n.clone(), *c)).collect()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (n, c) in &self.0 {
            let sign = if *c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sign}{n}")?;
            } else {
                write!(f, "{sign}{mag}{n}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Exponent of a Pochhammer factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Power {
    /// A nonzero integer power.
    Int(i32),
    /// `sign * var`, where `var` is a formal variable (such as `a`, `b`).
    Formal { var: String, sign: i32 },
}

/// `(e^L y^e q^c; q)_inf ^ power`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PochFactor {
    pub form: LinearForm,
    pub y_exp: Vec<i32>,
    pub shift: usize,
    pub power: Power,
}

impl PochFactor {
    /// Checks the factor: with `c = 0` the y-exponent must be nonzero, since
    /// otherwise the `n = 0` binomial `1 - e^L` is not a unit.
    pub fn new(form: LinearForm, y_exp: Vec<i32>, shift: usize, power: Power) -> Result<Self> {
        let f = PochFactor { form, y_exp, shift, power };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shift == 0 && self.y_exp.iter().all(|&e| e == 0) {
            return Err(Error::InvalidArgument(format!(
                "factor ({}; q) with q-shift 0 and no y-exponent has a non-unit binomial",
                self.form
            )));
        }
        match &self.power {
            Power::Int(0) => Err(Error::InvalidArgument("factor power must be nonzero".into())),
            Power::Formal { sign, .. } if sign.abs() != 1 => {
                Err(Error::InvalidArgument("formal power sign must be +1 or -1".into()))
            }
            _ => Ok(()),
        }
    }

    fn check_arity(&self, ring: &Ring) -> Result<()> {
        let ny = ring.context().y_vars.len();
        if self.y_exp.len() != ny {
            return Err(Error::InvalidArgument(format!(
                "factor has {} y-exponents, ring declares {ny} y-variables",
                self.y_exp.len()
            )));
        }
        Ok(())
    }
}

/// `e^{kL} y^{k e} * series`, with the limit applied.
fn atom(ring: &Ring, f: &PochFactor, k: i64, series: QSeries, limit: Option<YLimit<'_>>) -> Result<RingElement> {
    let ye: Vec<i32> = f.y_exp.iter().map(|&e| e * k as i32).collect();
    if limit.is_some_and(|l| l(&ye).is_none()) {
        return Ok(ring.zero());
    }
    let mono = vec![0; ring.context().vars.len()];
    let y = ring.term(mono, ye, series);
    if y.is_zero() {
        return Ok(y);
    }
    let pairs: Vec<(String, i64)> = f.form.pairs().into_iter().map(|(n, c)| (n, c * k)).collect();
    let e = ring.exp_linear(&pairs)?;
    Ok(match limit {
        Some(l) => e.mul_limited(&y, l),
        None => e.mul(&y),
    })
}

fn mul(a: &RingElement, b: &RingElement, limit: Option<YLimit<'_>>) -> RingElement {
    match limit {
        Some(l) => a.mul_limited(b, l),
        None => a.mul(b),
    }
}

/// `log (e^L y^e q^c; q)_inf = -sum_{d>=1} (1/d) e^{dL} y^{de} q^{cd} / (1 - q^d)`,
/// truncated (the power of the factor is ignored).
pub fn poch_log(f: &PochFactor, ring: &Ring) -> Result<RingElement> {
    poch_log_limited(f, ring, None)
}

fn poch_log_limited(f: &PochFactor, ring: &Ring, limit: Option<YLimit<'_>>) -> Result<RingElement> {
    f.validate()?;
    f.check_arity(ring)?;
    let n = ring.truncation().order;
    let mut acc = ring.zero();
    for d in 1usize.. {
        if f.shift * d > n {
            break;
        }
        let s = QSeries::geometric(d, f.shift, n)?.scale(&-Rational::new(1.into(), (d as i64).into()));
        let t = atom(ring, f, d as i64, s, limit)?;
        let stop = t.is_zero();
        acc = acc.add(&t);
        if stop && f.shift == 0 {
            // every larger d lies further outside the y-bound or limit
            break;
        }
    }
    Ok(acc)
}

/// Direct product of `prod_{n>=0} (1 - e^L y^e q^{c+n})^{sign}` for one factor.
fn direct_factor(f: &PochFactor, sign: i32, ring: &Ring, limit: Option<YLimit<'_>>) -> Result<RingElement> {
    let n = ring.truncation().order;
    let mut acc = ring.one();
    for m in f.shift..=n {
        let piece = if sign > 0 {
            let a = atom(ring, f, 1, QSeries::monomial(m, Rational::one(), n), limit)?;
            ring.one().sub(&a)
        } else {
            // 1/(1 - X q^m) = sum_k X^k q^{km}
            let mut g = ring.one();
            for k in 1i64.. {
                let qp = m * k as usize;
                if qp > n {
                    break;
                }
                let a = atom(ring, f, k, QSeries::monomial(qp, Rational::one(), n), limit)?;
                let stop = a.is_zero();
                g = g.add(&a);
                if stop && m == 0 {
                    break;
                }
            }
            g
        };
        acc = mul(&acc, &piece, limit);
    }
    Ok(acc)
}

/// Product of factors. Integer powers are expanded as products of
/// binomials (inverses as per-binomial geometric series); formal powers are
/// grouped by variable and computed as `exp(var * sum sign * log(factor))`.
pub fn poch_product(factors: &[PochFactor], ring: &Ring) -> Result<RingElement> {
    poch_product_limited(factors, ring, None)
}

pub(crate) fn poch_product_limited(
    factors: &[PochFactor],
    ring: &Ring,
    limit: Option<YLimit<'_>>,
) -> Result<RingElement> {
    let mut acc = ring.one();
    let mut formal: BTreeMap<String, RingElement> = BTreeMap::new();
    for f in factors {
        f.validate()?;
        f.check_arity(ring)?;
        match &f.power {
            Power::Int(p) => {
                let piece = direct_factor(f, p.signum(), ring, limit)?;
                for _ in 0..p.unsigned_abs() {
                    acc = mul(&acc, &piece, limit);
                }
            }
            Power::Formal { var, sign } => {
                let l = poch_log_limited(f, ring, limit)?;
                let slot = formal.entry(var.clone()).or_insert_with(|| ring.zero());
                *slot = if *sign > 0 { slot.add(&l) } else { slot.sub(&l) };
            }
        }
    }
    for (var, log) in formal {
        let v = ring.var(&var)?;
        let arg = mul(&v, &log, limit);
        let e = match limit {
            Some(l) => arg.exp_limited(l)?,
            None => arg.exp_truncated()?,
        };
        acc = mul(&acc, &e, limit);
    }
    Ok(acc)
}

/// Keeps the terms with all-zero y-exponent.
pub fn y0_coefficient(p: &RingElement) -> Result<RingElement> {
    p.y0_coefficient()
}
