//! q-expansions of brackets, bi-brackets, Z-values and Eisenstein series.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::index::{BiBracketIndex, BracketIndex};
use super::polys::{bernoulli, q_e, q_o, IntPoly};
use crate::error::{Error, Result};
use crate::series::rational::{binomial, factorial, int, Rational};
use crate::series::QSeries;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum CacheKey {
    Bi(BiBracketIndex),
    Z(Vec<u32>),
}

/// Series computed at the largest order seen so far; shorter requests are
/// served by truncation. Insertions are idempotent so concurrent callers
/// only ever race to store identical values.
fn cache() -> &'static Mutex<HashMap<CacheKey, QSeries>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, QSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: CacheKey, order: usize, compute: impl FnOnce() -> Result<QSeries>) -> Result<QSeries> {
    if let Some(s) = cache().lock().unwrap().get(&key) {
        if s.order() >= order {
            return Ok(s.truncate(order));
        }
    }
    let s = compute()?;
    let mut guard = cache().lock().unwrap();
    match guard.get(&key) {
        Some(old) if old.order() >= s.order() => {}
        _ => {
            guard.insert(key, s.clone());
        }
    }
    Ok(s)
}

/// `[s_1, ..., s_l]` by enumeration of `n_1 > ... > n_l >= 1`, `d_i >= 1`
/// with `sum n_i d_i <= N`.
pub fn bracket(idx: &BracketIndex, order: usize) -> QSeries {
    bibracket(&idx.to_bibracket(), order)
}

/// The bi-bracket by direct enumeration over `u_1 > ... > u_l > 0`,
/// `v_i > 0` with `sum u_i v_i <= N`.
pub fn bibracket(idx: &BiBracketIndex, order: usize) -> QSeries {
    cached(CacheKey::Bi(idx.clone()), order, || Ok(bibracket_uncached(idx, order))).expect("enumeration is infallible")
}

fn bibracket_uncached(idx: &BiBracketIndex, order: usize) -> QSeries {
    let l = idx.depth();
    let mut acc = vec![BigInt::zero(); order + 1];
    enumerate(idx, l, 1, order, &BigInt::one(), order, &mut acc);
    let mut denom = BigInt::one();
    for (s, r) in idx.s.iter().zip(&idx.r) {
        denom *= factorial(s - 1) * factorial(*r);
    }
    QSeries::from_coeffs(acc.into_iter().map(|c| Rational::new(c, denom.clone())).collect(), order)
}

/// Fills positions `pos-1, pos-2, ..., 0` (smallest `u` first).
fn enumerate(
    idx: &BiBracketIndex,
    pos: usize,
    min_u: u64,
    budget: usize,
    weight: &BigInt,
    order: usize,
    acc: &mut [BigInt],
) {
    if pos == 0 {
        acc[order - budget] += weight;
        return;
    }
    let i = pos - 1;
    let higher = i as u64; // positions above this one each cost more than u
    let (s, r) = (idx.s[i], idx.r[i]);
    let budget = budget as u64;
    let mut u = min_u;
    while u + higher * (u + 1) <= budget {
        let ur = BigInt::from(u).pow(r);
        let mut v = 1u64;
        while u * v + higher * (u + 1) <= budget {
            let w = weight * &ur * BigInt::from(v).pow(s - 1);
            enumerate(idx, i, u + 1, (budget - u * v) as usize, &w, order, acc);
            v += 1;
        }
        u += 1;
    }
}

/// `poly(q^n) / (1 - q^n)^s`, truncated.
fn kernel(poly: &IntPoly, n: usize, s: u32, order: usize) -> QSeries {
    let mut num = QSeries::zero(order);
    for (k, c) in poly.coeffs().iter().enumerate() {
        if k * n <= order && !c.is_zero() {
            num.set_coeff(k * n, c.clone());
        }
    }
    // 1/(1-t)^s = sum_k C(k+s-1, s-1) t^k
    let mut den = QSeries::zero(order);
    let mut k = 0;
    while k * n <= order {
        den.set_coeff(k * n, Rational::from_integer(binomial(k as u32 + s - 1, s - 1)));
        k += 1;
    }
    &num * &den
}

/// `sum_{n_1 > ... > n_l >= 1} prod_i f_i(n_i)` where each kernel
/// `f_i(n)` is `O(q^n)`.
fn nested_sum(kernels: &[Box<dyn Fn(usize) -> QSeries + '_>], order: usize) -> QSeries {
    let l = kernels.len();
    if l == 0 {
        return QSeries::one(order);
    }
    // inner[n] = sum over the chain from position i onwards with n_i = n.
    let mut inner: Vec<QSeries> = (0..=order).map(|n| if n == 0 { QSeries::zero(order) } else { kernels[l - 1](n) }).collect();
    for i in (0..l - 1).rev() {
        let mut next = vec![QSeries::zero(order); order + 1];
        let mut prefix = QSeries::zero(order);
        for n in 1..=order {
            prefix.add_assign_ref(&inner[n - 1]);
            if !prefix.is_zero() {
                next[n] = &kernels[i](n) * &prefix;
            }
        }
        inner = next;
    }
    let mut total = QSeries::zero(order);
    for s in &inner {
        total.add_assign_ref(s);
    }
    total
}

/// The same bi-bracket through the Eulerian kernel form
/// `sum_{n_1 > ... > n_l > 0} prod_i n_i^{r_i}/r_i! * Q^E_{s_i}(q^{n_i}) / (1-q^{n_i})^{s_i}`.
pub fn bibracket_eulerian(idx: &BiBracketIndex, order: usize) -> Result<QSeries> {
    let polys: Vec<IntPoly> = idx.s.iter().map(|&s| q_e(s)).collect::<Result<_>>()?;
    let kernels: Vec<Box<dyn Fn(usize) -> QSeries + '_>> = (0..idx.depth())
        .map(|i| {
            let p = &polys[i];
            let (s, r) = (idx.s[i], idx.r[i]);
            Box::new(move |n: usize| {
                let c = Rational::new(BigInt::from(n).pow(r), factorial(r));
                kernel(p, n, s, order).scale(&c)
            }) as Box<dyn Fn(usize) -> QSeries>
        })
        .collect();
    Ok(nested_sum(&kernels, order))
}

/// Okounkov's `Z(s_1, ..., s_l)`, every `s_i >= 2`.
pub fn zvalue(idx: &[u32], order: usize) -> Result<QSeries> {
    if let Some(&bad) = idx.iter().find(|&&s| s < 2) {
        return Err(Error::InvalidArgument(format!("Z-value entries must be >= 2, got {bad}")));
    }
    cached(CacheKey::Z(idx.to_vec()), order, || {
        let polys: Vec<IntPoly> = idx.iter().map(|&s| q_o(s)).collect::<Result<_>>()?;
        let kernels: Vec<Box<dyn Fn(usize) -> QSeries + '_>> = idx
            .iter()
            .zip(&polys)
            .map(|(&s, p)| Box::new(move |n: usize| kernel(p, n, s, order)) as Box<dyn Fn(usize) -> QSeries>)
            .collect();
        Ok(nested_sum(&kernels, order))
    })
}

/// `G_k = (1/(k-1)!) (-B_k/(2k) + sum_n sigma_{k-1}(n) q^n)` for even `k >= 2`.
pub fn eisenstein(k: u32, order: usize) -> Result<QSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!("Eisenstein weight must be even and >= 2, got {k}")));
    }
    let mut coeffs = vec![Rational::zero(); order + 1];
    coeffs[0] = -bernoulli(k as usize) / int(2 * k as i64);
    for d in 1..=order {
        let p = Rational::from_integer(BigInt::from(d).pow(k - 1));
        let mut m = d;
        while m <= order {
            coeffs[m] += &p;
            m += d;
        }
    }
    let f = Rational::new(1.into(), factorial(k - 1));
    Ok(QSeries::from_coeffs(coeffs, order).scale(&f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::rat;

    fn divisor_count(m: usize) -> i64 {
        (1..=m).filter(|d| m % d == 0).count() as i64
    }

    fn sigma(k: u32, m: usize) -> i64 {
        (1..=m).filter(|d| m % d == 0).map(|d| (d as i64).pow(k)).sum()
    }

    #[test]
    fn bracket_one_is_divisor_count() {
        let b = bracket(&BracketIndex::new(vec![1]).unwrap(), 6);
        let oracle: Vec<i64> = (0..=6).map(|m| if m == 0 { 0 } else { divisor_count(m) }).collect();
        assert_eq!(b, QSeries::from_ints(&oracle, 6));
        assert_eq!(b, QSeries::from_ints(&[0, 1, 2, 2, 3, 2, 4], 6));
    }

    #[test]
    fn bracket_two_is_divisor_sum() {
        let b = bracket(&BracketIndex::new(vec![2]).unwrap(), 6);
        let oracle: Vec<i64> = (0..=6).map(|m| if m == 0 { 0 } else { sigma(1, m) }).collect();
        assert_eq!(b, QSeries::from_ints(&oracle, 6));
        assert_eq!(b, QSeries::from_ints(&[0, 1, 3, 4, 7, 6, 12], 6));
    }

    #[test]
    fn empty_bracket_is_one() {
        assert_eq!(bracket(&BracketIndex::empty(), 5), QSeries::one(5));
        assert_eq!(zvalue(&[], 5).unwrap(), QSeries::one(5));
    }

    #[test]
    fn bibracket_two_one() {
        // coefficient of q^m is m * tau(m)
        let b = bibracket(&BiBracketIndex::new(vec![2], vec![1]).unwrap(), 5);
        assert_eq!(b, QSeries::from_ints(&[0, 1, 4, 6, 12, 10], 5));
    }

    #[test]
    fn bibracket_three_one_brute_force() {
        let n = 4;
        let mut oracle = vec![Rational::zero(); n + 1];
        for u in 1..=n {
            for v in 1..=n {
                if u * v <= n {
                    oracle[u * v] += rat((u * v * v) as i64, 2);
                }
            }
        }
        let b = bibracket(&BiBracketIndex::new(vec![3], vec![1]).unwrap(), n);
        assert_eq!(b, QSeries::from_coeffs(oracle, n));
    }

    #[test]
    fn depth_two_brute_force() {
        let idx = BiBracketIndex::new(vec![2, 1], vec![0, 1]).unwrap();
        let n = 12;
        let mut oracle = vec![Rational::zero(); n + 1];
        for u1 in 1..=n {
            for u2 in 1..u1 {
                for v1 in 1..=n {
                    for v2 in 1..=n {
                        let e = u1 * v1 + u2 * v2;
                        if e <= n {
                            oracle[e] += int((v1 * u2) as i64);
                        }
                    }
                }
            }
        }
        assert_eq!(bibracket(&idx, n), QSeries::from_coeffs(oracle, n));
    }

    #[test]
    fn zvalue_rejects_small_entries() {
        assert!(zvalue(&[2, 1], 5).is_err());
    }

    #[test]
    fn eisenstein_constants() {
        assert_eq!(eisenstein(2, 3).unwrap().coeff(0), rat(-1, 24));
        assert_eq!(eisenstein(4, 3).unwrap().coeff(0), rat(1, 1440));
        assert_eq!(eisenstein(6, 3).unwrap().coeff(0), rat(-1, 60480));
        assert!(eisenstein(3, 3).is_err());
        assert!(eisenstein(0, 3).is_err());
    }

    #[test]
    fn eisenstein_g2_divisor_sums() {
        let g = eisenstein(2, 8).unwrap();
        for m in 1..=8 {
            assert_eq!(g.coeff(m), int(sigma(1, m)));
        }
    }
}
