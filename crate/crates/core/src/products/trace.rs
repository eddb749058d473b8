//! The named product traces.

use std::fmt;
use std::str::FromStr;

use super::{poch_product, poch_product_limited, LinearForm, PochFactor, Power};
use crate::error::{Error, Result};
use crate::series::{Ring, RingElement, Truncation};

/// Default cap on the estimated number of stored coefficients.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceKind {
    /// `(q)(xyq) / ((xq)(yq))` with `x = e^z`, `y = e^w`.
    Lemma31,
    /// `prod_{j<=r} (x_j q)/(y_j q)` with `x_1...x_r = y_1...y_r`.
    Theorem32(u32),
    /// The multi-player trace with `players` Laurent variables; the single
    /// factors with formal powers `a`, `b` are included when `with_ab`.
    PN { players: u32, with_ab: bool },
    /// `(xq)(x^{-1}q) / (q)^2` with `x = e^z`.
    BlochOkounkov,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceKind::Lemma31 => write!(f, "lemma31"),
            TraceKind::Theorem32(r) => write!(f, "thm32:{r}"),
            TraceKind::PN { players, with_ab } => {
                write!(f, "pn:{players}")?;
                if *with_ab {
                    write!(f, "+ab")?;
                }
                Ok(())
            }
            TraceKind::BlochOkounkov => write!(f, "bo"),
        }
    }
}

impl FromStr for TraceKind {
    type Err = Error;

    /// `lemma31`, `thm32:r`, `pn:N` or `bo`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.parse::<u32>().map_err(|_| Error::Parse(format!("bad trace parameter in {s:?}")));
        match s.split_once(':') {
            None if s == "lemma31" => Ok(TraceKind::Lemma31),
            None if s == "bo" => Ok(TraceKind::BlochOkounkov),
            Some(("thm32", r)) => Ok(TraceKind::Theorem32(num(r)?)),
            Some(("pn", n)) => Ok(TraceKind::PN { players: num(n)?, with_ab: false }),
            _ => Err(Error::Parse(format!("unknown trace {s:?}; expected lemma31, thm32:r, pn:N or bo"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSpec {
    pub kind: TraceKind,
    pub trunc: Truncation,
    pub budget: u64,
}

impl TraceSpec {
    pub fn new(kind: TraceKind, trunc: Truncation) -> Self {
        TraceSpec { kind, trunc, budget: DEFAULT_BUDGET }
    }
}

/// Variable declarations of a trace.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TraceVars {
    pub graded: Vec<String>,
    pub ungraded: Vec<String>,
    pub y_vars: Vec<String>,
}

impl TraceVars {
    fn ring(&self, trunc: Truncation) -> Ring {
        let g: Vec<&str> = self.graded.iter().map(String::as_str).collect();
        let u: Vec<&str> = self.ungraded.iter().map(String::as_str).collect();
        let y: Vec<&str> = self.y_vars.iter().map(String::as_str).collect();
        Ring::new(&g, &u, &y, trunc)
    }
}

fn pair_name(prefix: &str, l: u32, i: u32, j: u32, players: u32) -> String {
    if players <= 9 {
        format!("{prefix}{l}_{i}{j}")
    } else {
        format!("{prefix}{l}_{i}_{j}")
    }
}

fn factor(form: LinearForm, y_exp: Vec<i32>, shift: usize, power: Power) -> Result<PochFactor> {
    PochFactor::new(form, y_exp, shift, power)
}

/// Variables and factors of a trace.
pub fn trace_factors(kind: TraceKind) -> Result<(TraceVars, Vec<PochFactor>)> {
    let int = Power::Int;
    match kind {
        TraceKind::Lemma31 => {
            let (z, w) = (LinearForm::var("z"), LinearForm::var("w"));
            let vars = TraceVars { graded: vec!["z".into(), "w".into()], ..Default::default() };
            let fs = vec![
                factor(LinearForm::zero(), vec![], 1, int(1))?,
                factor(z.add(&w), vec![], 1, int(1))?,
                factor(z, vec![], 1, int(-1))?,
                factor(w, vec![], 1, int(-1))?,
            ];
            Ok((vars, fs))
        }
        TraceKind::BlochOkounkov => {
            let z = LinearForm::var("z");
            let vars = TraceVars { graded: vec!["z".into()], ..Default::default() };
            let fs = vec![
                factor(z.clone(), vec![], 1, int(1))?,
                factor(z.scale(-1), vec![], 1, int(1))?,
                factor(LinearForm::zero(), vec![], 1, int(-2))?,
            ];
            Ok((vars, fs))
        }
        TraceKind::Theorem32(r) => {
            if r == 0 {
                return Err(Error::InvalidArgument("theorem32 needs r >= 1".into()));
            }
            let zs: Vec<String> = (1..=r).map(|j| format!("z{j}")).collect();
            let ws: Vec<String> = (1..r).map(|j| format!("w{j}")).collect();
            let mut w_last = LinearForm::zero();
            for z in &zs {
                w_last = w_last.add(&LinearForm::var(z));
            }
            for w in &ws {
                w_last = w_last.sub(&LinearForm::var(w));
            }
            let mut fs = Vec::new();
            for z in &zs {
                fs.push(factor(LinearForm::var(z), vec![], 1, int(1))?);
            }
            for w in &ws {
                fs.push(factor(LinearForm::var(w), vec![], 1, int(-1))?);
            }
            fs.push(factor(w_last, vec![], 1, int(-1))?);
            let mut graded = zs;
            graded.extend(ws);
            Ok((TraceVars { graded, ..Default::default() }, fs))
        }
        TraceKind::PN { players, with_ab } => {
            if players < 2 {
                return Err(Error::InvalidArgument("the trace needs at least 2 players".into()));
            }
            let np = players as usize;
            let unit = |i: u32| -> Vec<i32> {
                let mut e = vec![0; np];
                e[i as usize - 1] = 1;
                e
            };
            let mut graded = Vec::new();
            let mut fs = Vec::new();
            for i in 1..=players {
                for j in i + 1..=players {
                    // y_{i,j} = y_i^{-1} y_j
                    let mut yij = vec![0; np];
                    yij[i as usize - 1] = -1;
                    yij[j as usize - 1] = 1;
                    let neg: Vec<i32> = yij.iter().map(|e| -e).collect();
                    let z1 = pair_name("z", 1, i, j, players);
                    let z2 = pair_name("z", 2, i, j, players);
                    let v1 = pair_name("v", 1, i, j, players);
                    let v2 = pair_name("v", 2, i, j, players);
                    let (lz1, lz2) = (LinearForm::var(&z1), LinearForm::var(&z2));
                    let (lv1, lv2) = (LinearForm::var(&v1), LinearForm::var(&v2));
                    fs.push(factor(lz1.add(&lz2), yij.clone(), 0, int(1))?);
                    fs.push(factor(LinearForm::zero(), yij.clone(), 0, int(1))?);
                    fs.push(factor(lz1, yij.clone(), 0, int(-1))?);
                    fs.push(factor(lz2, yij.clone(), 0, int(-1))?);
                    fs.push(factor(lv1.add(&lv2), neg.clone(), 1, int(1))?);
                    fs.push(factor(LinearForm::zero(), neg.clone(), 1, int(1))?);
                    fs.push(factor(lv1, neg.clone(), 1, int(-1))?);
                    fs.push(factor(lv2, neg, 1, int(-1))?);
                    graded.extend([z1, z2, v1, v2]);
                }
            }
            let mut ungraded = Vec::new();
            if with_ab {
                let formal = |v: &str, sign: i32| Power::Formal { var: v.into(), sign };
                for i in 1..=players {
                    let (zi, vi) = (format!("z{i}"), format!("v{i}"));
                    let e = unit(i);
                    let neg: Vec<i32> = e.iter().map(|x| -x).collect();
                    fs.push(factor(LinearForm::var(&zi), e.clone(), 0, formal("a", 1))?);
                    fs.push(factor(LinearForm::zero(), e, 0, formal("a", -1))?);
                    fs.push(factor(LinearForm::var(&vi), neg.clone(), 1, formal("b", 1))?);
                    fs.push(factor(LinearForm::zero(), neg, 1, formal("b", -1))?);
                    graded.extend([zi, vi]);
                }
                ungraded = vec!["a".into(), "b".into()];
            }
            let y_vars = (1..=players).map(|i| format!("y{i}")).collect();
            Ok((TraceVars { graded, ungraded, y_vars }, fs))
        }
    }
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Rough upper estimate of the number of stored rational coefficients.
pub fn estimate_terms(kind: TraceKind, trunc: Truncation) -> Result<u64> {
    let (vars, _) = trace_factors(kind)?;
    let g = vars.graded.len() as u64;
    let d = trunc.degree as u64;
    let monos = binomial_u64(g + d, d).saturating_mul((d + 1).saturating_pow(vars.ungraded.len() as u32));
    let ygrid = (2 * trunc.ybound as u64 + 1).saturating_pow(vars.y_vars.len() as u32);
    Ok(monos.saturating_mul(ygrid).saturating_mul(trunc.order as u64 + 1))
}

fn guard(spec: &TraceSpec) -> Result<()> {
    let est = estimate_terms(spec.kind, spec.trunc)?;
    if est > spec.budget {
        return Err(Error::Budget(format!(
            "trace {} at (N, D, Y) = ({}, {}, {}) needs about {est} coefficients, budget is {}",
            spec.kind, spec.trunc.order, spec.trunc.degree, spec.trunc.ybound, spec.budget
        )));
    }
    Ok(())
}

/// Expands a trace at the requested truncation.
pub fn build_trace(spec: &TraceSpec) -> Result<RingElement> {
    guard(spec)?;
    let (vars, fs) = trace_factors(spec.kind)?;
    poch_product(&fs, &vars.ring(spec.trunc))
}

/// The y-free part of a trace, computed exactly.
///
/// Factors whose y-exponent has positive weight `psi(e) = sum_k k e_k` are
/// multiplied separately from those with negative weight. Every factor of
/// negative weight carries `q^1` per unit of y-degree, so a positive-weight
/// term `y^e q^k` can only meet a partner when `psi(e) <= P (N - k)`, where
/// `P` bounds `psi` of a single negative atom. Terms violating this are
/// dropped while multiplying; the condition is inherited by every partial
/// product, so nothing that reaches the y^0 coefficient is lost. The two
/// halves are then combined with a product that keeps only y^0.
pub fn trace_y0(spec: &TraceSpec) -> Result<RingElement> {
    let (vars, fs) = trace_factors(spec.kind)?;
    if vars.y_vars.is_empty() {
        guard(spec)?;
        return poch_product(&fs, &vars.ring(spec.trunc));
    }
    let weight = |e: &[i32]| -> i64 { e.iter().enumerate().map(|(k, &x)| (k as i64 + 1) * x as i64).sum() };
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for f in fs {
        match weight(&f.y_exp) {
            w if w > 0 => pos.push(f),
            w if w < 0 && f.shift >= 1 => neg.push(f),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "factor with y-exponent {:?} and q-shift {} does not fit the split y^0 expansion",
                    f.y_exp, f.shift
                )))
            }
        }
    }
    let n = spec.trunc.order;
    let per_atom = neg.iter().map(|f| -weight(&f.y_exp)).max().unwrap_or(1).max(1);
    let max_abs = |fs: &[PochFactor]| fs.iter().flat_map(|f| f.y_exp.iter()).map(|e| e.unsigned_abs()).max().unwrap_or(1);
    let y_neg = n as u32 * max_abs(&neg);
    let y_pos = (per_atom as u32) * n as u32 * max_abs(&pos);
    let est_spec = TraceSpec { trunc: Truncation::new(n, spec.trunc.degree, y_neg), ..spec.clone() };
    guard(&est_spec)?;

    let limit = move |e: &[i32]| -> Option<usize> {
        let w = weight(e);
        if w < 0 || w > per_atom * n as i64 {
            return None;
        }
        let need = (w + per_atom - 1) / per_atom;
        Some(n - need as usize)
    };
    let ring_pos = vars.ring(Truncation::new(n, spec.trunc.degree, y_pos));
    let ring_neg = vars.ring(Truncation::new(n, spec.trunc.degree, y_neg));
    let a = poch_product_limited(&pos, &ring_pos, Some(&limit))?;
    let b = poch_product(&neg, &ring_neg)?;
    if a.saturated() || b.saturated() {
        return Err(Error::Saturated { ybound: y_neg, order: n });
    }
    a.mul_y0(&b)?.with_ybound(spec.trunc.ybound)
}
