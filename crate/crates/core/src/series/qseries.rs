//! Dense truncated power series in `q` over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// A power series `c_0 + c_1 q + ... + c_N q^N` known up to (and including)
/// the truncation order `N`.
///
/// Binary operations on series of different orders work at the smaller
/// order and record it on the result.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c q^k`, which is zero when `k` exceeds the order.
    pub fn monomial(k: usize, c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// Builds a series from coefficients; missing coefficients up to `order`
    /// are zero and extra ones are dropped.
    pub fn from_coeffs(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        QSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect(), order)
    }

    /// `sum_{n >= c} q^{n d}`, truncated at `order`.
    pub fn geometric(d: usize, c: usize, order: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("geometric step d must be positive".into()));
        }
        let mut s = Self::zero(order);
        let mut k = c * d;
        while k <= order {
            s.coeffs[k] = Rational::one();
            k += d;
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `q^k`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_ref(&self, k: usize) -> &Rational {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, c: Rational) {
        if k <= self.order() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    /// True when `self` agrees with `other` on every coefficient up to the
    /// smaller of the two orders.
    pub fn is_prefix_of(&self, other: &QSeries) -> bool {
        let n = self.order().min(other.order());
        self.coeffs[..=n] == other.coeffs[..=n]
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order());
        }
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut s = Self::zero(n);
        for i in 0..=n.saturating_sub(k) {
            if k + i <= n {
                s.coeffs[k + i] = self.coeffs[i].clone();
            }
        }
        s
    }

    /// `self += a * b`, truncated at `self`'s order. Zero coefficients are
    /// skipped so sparse inputs stay cheap.
    pub fn add_mul_assign(&mut self, a: &QSeries, b: &QSeries) {
        let n = self.order().min(a.order()).min(b.order());
        if n < self.order() {
            self.coeffs.truncate(n + 1);
        }
        let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) else {
            return;
        };
        if va + vb > n {
            return;
        }
        for i in va..=n - vb {
            let ai = &a.coeffs[i];
            if ai.is_zero() {
                continue;
            }
            for j in vb..=n - i {
                let bj = &b.coeffs[j];
                if !bj.is_zero() {
                    self.coeffs[i + j] += ai * bj;
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &QSeries) {
        let n = self.order().min(other.order());
        self.coeffs.truncate(n + 1);
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !y.is_zero() {
                *x += y;
            }
        }
    }

    pub fn sub_assign_ref(&mut self, other: &QSeries) {
        let n = self.order().min(other.order());
        self.coeffs.truncate(n + 1);
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !y.is_zero() {
                *x -= y;
            }
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotUnit("q-series with zero constant term".into()));
        }
        let n = self.order();
        let inv0 = c0.recip();
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out.coeffs[k - j];
                }
            }
            out.coeffs[k] = -acc * &inv0;
        }
        Ok(out)
    }

    /// Integer coefficients, when every coefficient is an integer.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }
}

impl<'a> Add<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<'a> Sub<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl<'a> Mul<&'a QSeries> for &'a QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let mut out = QSeries::zero(self.order().min(rhs.order()));
        out.add_mul_assign(self, rhs);
        out
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for QSeries {
    type Output = QSeries;
    fn add(self, rhs: QSeries) -> QSeries {
        &self + &rhs
    }
}

impl Sub for QSeries {
    type Output = QSeries;
    fn sub(self, rhs: QSeries) -> QSeries {
        &self - &rhs
    }
}

impl Mul for QSeries {
    type Output = QSeries;
    fn mul(self, rhs: QSeries) -> QSeries {
        &self * &rhs
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Rational::zero();
            let mag = if neg { -c } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::rat;

    #[test]
    fn difference_of_squares() {
        let a = QSeries::from_ints(&[1, 1], 2);
        let b = QSeries::from_ints(&[1, -1], 2);
        assert_eq!(&a * &b, QSeries::from_ints(&[1, 0, -1], 2));
    }

    #[test]
    fn geometric_times_one_minus_q() {
        // (sum_{k<=N} q^k)(1 - q) = 1 - q^{N+1}, which is 1 at order N.
        for n in 0..12 {
            let g = QSeries::geometric(1, 0, n).unwrap();
            let p = &g * &QSeries::from_ints(&[1, -1], n);
            // independent convolution oracle
            let mut expect = vec![0i64; n + 1];
            for i in 0..=n {
                for (j, bj) in [1i64, -1].iter().enumerate() {
                    if i + j <= n {
                        expect[i + j] += bj;
                    }
                }
            }
            assert_eq!(p, QSeries::from_ints(&expect, n));
            assert_eq!(p, QSeries::one(n));
        }
    }

    #[test]
    fn geometric_examples() {
        assert_eq!(QSeries::geometric(1, 1, 4).unwrap(), QSeries::from_ints(&[0, 1, 1, 1, 1], 4));
        assert_eq!(QSeries::geometric(2, 0, 5).unwrap(), QSeries::from_ints(&[1, 0, 1, 0, 1, 0], 5));
        assert_eq!(
            QSeries::geometric(3, 2, 9).unwrap(),
            QSeries::from_ints(&[0, 0, 0, 0, 0, 0, 1, 0, 0, 1], 9)
        );
        assert!(QSeries::geometric(0, 1, 4).is_err());
    }

    #[test]
    fn mixed_orders_take_minimum() {
        let a = QSeries::from_ints(&[1, 2, 3, 4], 3);
        let b = QSeries::from_ints(&[1, 1], 1);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!((&a * &b).order(), 1);
    }

    #[test]
    fn inverse_of_one_minus_q() {
        let s = QSeries::from_ints(&[1, -1], 6);
        assert_eq!(s.inverse().unwrap(), QSeries::geometric(1, 0, 6).unwrap());
        assert!(QSeries::from_ints(&[0, 1], 3).inverse().is_err());
    }

    #[test]
    fn display() {
        let s = QSeries::from_coeffs(vec![rat(-1, 24), int(1), int(3)], 2);
        assert_eq!(s.to_string(), "-1/24 + q + 3*q^2 + O(q^3)");
    }

    #[test]
    fn annihilation() {
        let s = QSeries::from_ints(&[3, -1, 4, 1, 5], 4);
        assert!((&s * &QSeries::zero(4)).is_zero());
        assert!(s.scale(&Rational::zero()).is_zero());
    }
}
