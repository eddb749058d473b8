//! Faulhaber polynomials and constrained power sums.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::poly::UniPoly;
use crate::series::rational::{binomial, int, Rational};
use crate::special::bernoulli_table;

/// A polynomial in one indeterminate `n`.
pub type NPoly = UniPoly;

/// `S_t(n) = sum_{k=1}^n k^t`.
pub fn faulhaber(t: u32) -> NPoly {
    let b = bernoulli_table(t as usize);
    let mut coeffs = vec![Rational::zero(); t as usize + 2];
    for (j, bj) in b.iter().enumerate() {
        // B_j^+ = (-1)^j B_j
        let bp = if j % 2 == 1 { -bj } else { bj.clone() };
        coeffs[t as usize + 1 - j] = Rational::from_integer(binomial(t + 1, j as u32)) * bp / int(t as i64 + 1);
    }
    UniPoly::new(coeffs)
}

/// `sum_{d_1 + ... + d_r = n, d_i >= 1} prod d_i^{t_i}` as a polynomial in
/// `n`, valid for `n >= 1`. Zero exponents are allowed.
pub(crate) fn composition_sum(ts: &[u32]) -> NPoly {
    let Some((&last, rest)) = ts.split_last() else {
        return UniPoly::zero();
    };
    if rest.is_empty() {
        return UniPoly::monomial(last as usize, Rational::one());
    }
    // sum_{d=1}^{n-1} c(n-d) d^t with c(x) = sum_k c_k x^k
    let inner = composition_sum(rest);
    let minus_one = int(-1);
    let mut out = UniPoly::zero();
    for (k, ck) in inner.coeffs().iter().enumerate() {
        if ck.is_zero() {
            continue;
        }
        for j in 0..=k {
            let sign = if j % 2 == 1 { int(-1) } else { int(1) };
            let c = ck * Rational::from_integer(binomial(k as u32, j as u32)) * sign;
            let s = faulhaber(last + j as u32).shift(&minus_one);
            out = out.add(&s.mul(&UniPoly::monomial(k - j, c)));
        }
    }
    out
}

fn check_positive(ts: &[u32]) -> Result<()> {
    if ts.is_empty() {
        return Err(Error::InvalidArgument("power sum needs at least one exponent".into()));
    }
    if ts.contains(&0) {
        return Err(Error::InvalidArgument(format!("power sum exponents must be >= 1: {ts:?}")));
    }
    Ok(())
}

/// `sum_{d_1 + ... + d_r = n, d_i >= 1} prod d_i^{t_i}`, every `t_i >= 1`.
pub fn power_sum_eq(ts: &[u32]) -> Result<NPoly> {
    check_positive(ts)?;
    Ok(composition_sum(ts))
}

/// `sum_{d_1 + ... + d_r <= n, d_i >= 1} prod d_i^{t_i}`, every `t_i >= 1`.
pub fn power_sum_le(ts: &[u32]) -> Result<NPoly> {
    let eq = power_sum_eq(ts)?;
    let mut out = UniPoly::zero();
    for (k, c) in eq.coeffs().iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&faulhaber(k as u32).scale(c));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::rat;

    #[test]
    fn small_faulhaber() {
        assert_eq!(faulhaber(0), UniPoly::x());
        assert_eq!(faulhaber(1), UniPoly::new(vec![int(0), rat(1, 2), rat(1, 2)]));
        let s3 = faulhaber(3);
        let mut acc = 0i64;
        for n in 0..=50 {
            if n > 0 {
                acc += n * n * n;
            }
            assert_eq!(s3.eval_int(n), int(acc));
        }
    }

    #[test]
    fn faulhaber_at_minus_one() {
        assert_eq!(faulhaber(0).eval_int(-1), int(-1));
        for t in 1..6 {
            assert_eq!(faulhaber(t).eval_int(-1), int(0));
        }
    }

    #[test]
    fn eq_examples() {
        let p = power_sum_eq(&[1, 1]).unwrap();
        assert_eq!(p, UniPoly::new(vec![int(0), rat(-1, 6), int(0), rat(1, 6)]));
        assert_eq!(p.eval_int(3), int(4));
        assert_eq!(power_sum_eq(&[4]).unwrap(), UniPoly::monomial(4, int(1)));
        assert!(power_sum_eq(&[1, 0]).is_err());
        assert!(power_sum_le(&[]).is_err());
    }

    #[test]
    fn le_example() {
        assert_eq!(power_sum_le(&[1, 1]).unwrap().eval_int(3), int(5));
        assert_eq!(power_sum_le(&[2, 1, 3]).unwrap().eval_int(1), int(0));
    }

    #[test]
    fn zero_exponents_count_compositions() {
        // C(n-1, 2)
        let p = composition_sum(&[0, 0, 0]);
        for n in 1..10i64 {
            assert_eq!(p.eval_int(n), int((n - 1) * (n - 2) / 2));
        }
    }
}
