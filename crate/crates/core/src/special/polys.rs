//! Eulerian numerators and Bernoulli numbers.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::poly::UniPoly;
use crate::series::rational::{binomial, factorial, int, Rational};

pub type IntPoly = UniPoly;

/// The numerator `t P_{s-1}(t)` in `t P_{s-1}(t) / (1-t)^s = sum_{d>=1} d^{s-1} t^d`.
///
/// Computed by multiplying the right-hand side by `(1-t)^s` through
/// t-order `2s + 4` and checking that every coefficient above degree `s`
/// cancels.
pub fn eulerian_numerator(s: u32) -> Result<IntPoly> {
    if s == 0 {
        return Err(Error::InvalidArgument("eulerian numerator needs s >= 1".into()));
    }
    let top = (2 * s + 4) as usize;
    let rhs: Vec<Rational> = (0..=top)
        .map(|d| if d == 0 { Rational::zero() } else { int(d as i64).pow(s as i32 - 1) })
        .collect();
    let mut prod = vec![Rational::zero(); top + 1];
    for j in 0..=s as usize {
        let c = Rational::from_integer(binomial(s, j as u32)) * if j % 2 == 0 { int(1) } else { int(-1) };
        for (d, r) in rhs.iter().enumerate() {
            if d + j <= top && !r.is_zero() {
                prod[d + j] += &c * r;
            }
        }
    }
    if prod[s as usize + 1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::InvalidArgument(format!("eulerian identity failed for s = {s}")));
    }
    prod.truncate(s as usize + 1);
    Ok(UniPoly::new(prod))
}

/// `Q^E_s(t) = t P_{s-1}(t) / (s-1)!`.
pub fn q_e(s: u32) -> Result<IntPoly> {
    Ok(eulerian_numerator(s)?.scale(&Rational::new(1.into(), factorial(s - 1))))
}

/// `Q^O_s(t)`: `t^{s/2}` for even `s`, `t^{(s-1)/2}(t+1)` for odd `s >= 3`.
pub fn q_o(s: u32) -> Result<IntPoly> {
    if s < 2 {
        return Err(Error::InvalidArgument(format!("Q^O_s needs s >= 2, got {s}")));
    }
    Ok(if s % 2 == 0 {
        UniPoly::monomial(s as usize / 2, Rational::one())
    } else {
        let h = (s as usize - 1) / 2;
        UniPoly::monomial(h, Rational::one()).add(&UniPoly::monomial(h + 1, Rational::one()))
    })
}

/// Bernoulli numbers `B_0..=B_n` from `t / (e^t - 1)`, so `B_1 = -1/2`.
pub fn bernoulli_table(n: usize) -> Vec<Rational> {
    // (e^t - 1)/t = sum_k t^k / (k+1)!; invert the series.
    let g: Vec<Rational> = (0..=n).map(|k| Rational::new(1.into(), factorial(k as u32 + 1))).collect();
    let mut inv = vec![Rational::zero(); n + 1];
    inv[0] = Rational::one();
    for k in 1..=n {
        let mut acc = Rational::zero();
        for j in 1..=k {
            acc += &g[j] * &inv[k - j];
        }
        inv[k] = -acc;
    }
    inv.into_iter()
        .enumerate()
        .map(|(k, c)| c * Rational::from_integer(factorial(k as u32)))
        .collect()
}

pub fn bernoulli(i: usize) -> Rational {
    bernoulli_table(i).pop().unwrap()
}
