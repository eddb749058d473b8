//! Built-in property and identity checks on fixed inputs.

use num_bigint::BigInt;

use crate::error::Result;
use crate::products::{build_trace, TraceKind, TraceSpec};
use crate::reduction::{eliminate, faulhaber, sumspec_eval, SumSpec};
use crate::series::rational::{int, rat};
use crate::series::{bell_coefficient, QSeries, Rational, Ring, RingElement, Truncation};
use crate::span::{enumerate_basis_exact, verify_theorem, Generator, Theorem};
use crate::special::{bibracket, bibracket_eulerian, bracket, eisenstein, zvalue, BracketIndex, FamilyTag};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn outcome(name: &'static str, r: Result<Option<String>>) -> CheckOutcome {
    match r {
        Ok(None) => CheckOutcome { name, pass: true, detail: String::new() },
        Ok(Some(why)) => CheckOutcome { name, pass: false, detail: why },
        Err(e) => CheckOutcome { name, pass: false, detail: e.to_string() },
    }
}

fn br(s: &[u32], n: usize) -> QSeries {
    bracket(&BracketIndex { s: s.to_vec() }, n)
}

fn sample_ring() -> Ring {
    Ring::new(&["z", "w"], &[], &["y"], Truncation::new(6, 4, 3))
}

/// A few fixed ring elements mixing formal, y and q dependence.
fn samples(ring: &Ring) -> Result<Vec<RingElement>> {
    let n = ring.truncation().order;
    let z = ring.var("z")?;
    let w = ring.var("w")?;
    let a = z.mul_series(&br(&[2], n)).add(&ring.y_monomial(&[1], 1));
    let b = ring.constant(rat(3, 2)).sub(&w.mul(&z)).add(&ring.y_monomial(&[-1], 2).scale(&int(-2)));
    let c = ring.exp_linear(&[("z".into(), 1), ("w".into(), -2)])?.mul_series(&(&br(&[1], n) + &QSeries::one(n)));
    Ok(vec![a, b, c])
}

fn ring_axioms() -> Result<Option<String>> {
    let ring = sample_ring();
    let xs = samples(&ring)?;
    let (zero, one) = (ring.zero(), ring.one());
    for a in &xs {
        if a.add(&zero) != *a || a.mul(&one) != *a || !a.sub(a).is_zero() {
            return Ok(Some("identity elements".into()));
        }
        for b in &xs {
            if a.add(b) != b.add(a) || a.mul(b) != b.mul(a) {
                return Ok(Some("commutativity".into()));
            }
            for c in &xs {
                if a.add(b).add(c) != a.add(&b.add(c)) {
                    return Ok(Some("additive associativity".into()));
                }
                if a.mul(b).mul(c) != a.mul(&b.mul(c)) {
                    return Ok(Some("multiplicative associativity".into()));
                }
                if a.mul(&b.add(c)) != a.mul(b).add(&a.mul(c)) {
                    return Ok(Some("distributivity".into()));
                }
            }
        }
    }
    Ok(None)
}

fn exp_additive() -> Result<Option<String>> {
    let ring = Ring::new(&["z", "w"], &[], &[], Truncation::new(8, 4, 0));
    let n = 8;
    let z = ring.var("z")?;
    let w = ring.var("w")?;
    let a = z.mul_series(&br(&[2], n)).add(&w.mul(&w).mul_series(&br(&[1], n)));
    let b = z.mul(&w).scale(&rat(-1, 3)).add(&w.mul_series(&br(&[3], n)));
    let lhs = a.add(&b).exp_truncated()?;
    let rhs = a.exp_truncated()?.mul(&b.exp_truncated()?);
    Ok((lhs != rhs).then(|| "exp(a + b) != exp(a) exp(b)".into()))
}

/// The z^m coefficient of `exp(sum_t f_t z^t / t!)` against the Bell sum.
fn exp_bell() -> Result<Option<String>> {
    let n = 6;
    let big = Ring::new(&["z", "x"], &[], &[], Truncation::new(n, 6, 0));
    let x = big.var("x")?;
    let z = big.var("z")?;
    let f: Vec<RingElement> = (1..=5u32)
        .map(|t| x.mul_series(&br(&[t], n)).add(&big.constant(rat(t as i64, 2))))
        .collect();
    let mut series = big.zero();
    let mut zt = big.one();
    for (t, ft) in f.iter().enumerate() {
        zt = zt.mul(&z);
        let fact = crate::series::rational::factorial(t as u32 + 1);
        series = series.add(&ft.mul(&zt).scale(&Rational::new(BigInt::from(1), fact)));
    }
    let e = series.exp_truncated()?;
    for m in 1..=5usize {
        let mut coeff = big.zero();
        for (mono, layer) in e.terms() {
            if mono[0] as usize == m {
                let mut rest = mono.clone();
                rest[0] = 0;
                for (y, s) in layer {
                    coeff = coeff.add(&big.term(rest.clone(), y.clone(), s.clone()));
                }
            }
        }
        let mut bell = big.zero();
        for (mono, layer) in bell_coefficient(&f, m)?.terms() {
            if mono[1] as usize + m <= 6 {
                for (y, s) in layer {
                    bell = bell.add(&big.term(mono.clone(), y.clone(), s.clone()));
                }
            }
        }
        if coeff != bell {
            return Ok(Some(format!("z^{m} coefficient")));
        }
    }
    Ok(None)
}

fn faulhaber_loops() -> Result<Option<String>> {
    for t in 0..=10u32 {
        let p = faulhaber(t);
        let mut acc = BigInt::from(0);
        for k in 0..=60i64 {
            if k > 0 {
                acc += BigInt::from(k).pow(t);
            }
            if p.eval_int(k) != Rational::from_integer(acc.clone()) {
                return Ok(Some(format!("t = {t}, n = {k}")));
            }
        }
    }
    Ok(None)
}

fn dual_formula() -> Result<Option<String>> {
    let n = 20;
    for w in 1..=5 {
        for e in enumerate_basis_exact(FamilyTag::Bd, w, 0)? {
            let Generator::BiBracket(b) = &e.generator else { continue };
            if bibracket(b, n) != bibracket_eulerian(b, n)? {
                return Ok(Some(format!("{b}")));
            }
        }
    }
    Ok(None)
}

fn prefix_stability() -> Result<Option<String>> {
    let (lo, hi) = (10, 18);
    let pairs: Vec<(&str, QSeries, QSeries)> = vec![
        ("[3,1]", br(&[3, 1], lo), br(&[3, 1], hi)),
        ("[2;1]", bibracket(&"[2;1]".parse()?, lo), bibracket(&"[2;1]".parse()?, hi)),
        ("Z(2,3)", zvalue(&[2, 3], lo)?, zvalue(&[2, 3], hi)?),
        ("G6", eisenstein(6, lo)?, eisenstein(6, hi)?),
    ];
    for (name, a, b) in pairs {
        if a != b.truncate(lo) {
            return Ok(Some(name.into()));
        }
    }
    let trace = |n| build_trace(&TraceSpec::new(TraceKind::Lemma31, Truncation::with_default_y(n, 4)));
    if trace(lo)? != trace(hi)?.truncate(Truncation::with_default_y(lo, 4)) {
        return Ok(Some("lemma31 trace".into()));
    }
    Ok(None)
}

fn z_identities() -> Result<Option<String>> {
    let n = 40;
    let z = |s: &[u32]| zvalue(s, n);
    let c = |x: Rational| QSeries::constant(x, n);
    let checks = [
        ("Z(2) = [2]", z(&[2])? == br(&[2], n)),
        ("Z(3) = 2[3]", z(&[3])? == br(&[3], n).scale(&int(2))),
        ("Z(4) = [4] - [2]/6", z(&[4])? == &br(&[4], n) - &br(&[2], n).scale(&rat(1, 6))),
        ("G2", eisenstein(2, n)? == &c(rat(-1, 24)) + &z(&[2])?),
        ("G4", eisenstein(4, n)? == &(&c(rat(1, 1440)) + &z(&[2])?.scale(&rat(1, 6))) + &z(&[4])?),
        (
            "G6",
            eisenstein(6, n)?
                == &(&(&c(rat(-1, 60480)) + &z(&[2])?.scale(&rat(1, 120))) + &z(&[4])?.scale(&rat(1, 4))) + &z(&[6])?,
        ),
    ];
    Ok(checks.iter().find(|(_, ok)| !ok).map(|(name, _)| name.to_string()))
}

fn reduction_certified() -> Result<Option<String>> {
    let n = 12;
    for (a, b) in [
        (vec![(0, 1)], vec![(0, 1)]),
        (vec![(1, 1)], vec![(0, 2)]),
        (vec![(0, 1), (1, 1)], vec![(1, 1)]),
        (vec![(0, 0)], vec![(0, 0), (1, 0)]),
    ] {
        let s = SumSpec::w_form(a, b)?;
        if eliminate(&s)?.evaluate(n) != sumspec_eval(&s, n)? {
            return Ok(Some(s.to_string()));
        }
    }
    Ok(None)
}

fn lemma31_weights() -> Result<Option<String>> {
    let r = verify_theorem(Theorem::Lemma31, 4, None, None)?;
    Ok((!r.pass()).then(|| "a coefficient left the weight span".into()))
}

/// The exact property suite: ring axioms, exp additivity and Bell
/// agreement, Faulhaber against loops, the two bi-bracket formulas, and
/// truncation-prefix stability.
pub fn property_suite() -> Vec<CheckOutcome> {
    vec![
        outcome("ring axioms", ring_axioms()),
        outcome("exp additivity", exp_additive()),
        outcome("exp and Bell agree", exp_bell()),
        outcome("Faulhaber against loops", faulhaber_loops()),
        outcome("bi-bracket dual formula", dual_formula()),
        outcome("truncation prefix stability", prefix_stability()),
    ]
}

/// Property suite plus the Z/Eisenstein identities, small reductions and
/// the degree-4 weight check of the two-variable trace.
pub fn full_suite() -> Vec<CheckOutcome> {
    let mut out = property_suite();
    out.push(outcome("Z and Eisenstein identities", z_identities()));
    out.push(outcome("reduction against enumeration", reduction_certified()));
    out.push(outcome("two-variable trace weights", lemma31_weights()));
    out
}
