//! Fraction-free row reduction over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::series::Rational;

/// Row echelon form produced by Bareiss elimination with the first nonzero
/// entry of each column as pivot.
pub(crate) struct Echelon {
    rows: Vec<Vec<BigInt>>,
    /// `(row, column)` of each pivot, in order.
    pivots: Vec<(usize, usize)>,
    ncols: usize,
}

/// Scales each rational row by the lcm of its denominators.
fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

impl Echelon {
    pub(crate) fn new(rows: &[Vec<Rational>], ncols: usize) -> Echelon {
        let mut m = integer_rows(rows);
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..ncols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let (top, rest) = m.split_at_mut(r + 1);
            let pr = &top[r];
            for row in rest.iter_mut() {
                if row[c].is_zero() {
                    for x in row[c + 1..].iter_mut() {
                        *x = &*x * &pr[c] / &prev;
                    }
                    continue;
                }
                for j in c + 1..ncols {
                    let v = &pr[c] * &row[j] - &row[c] * &pr[j];
                    debug_assert!((&v % &prev).is_zero());
                    row[j] = v / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            pivots.push((r, c));
            r += 1;
            if r == m.len() {
                break;
            }
        }
        Echelon { rows: m, pivots, ncols }
    }

    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub(crate) fn is_pivot(&self, c: usize) -> bool {
        self.pivots.iter().any(|&(_, pc)| pc == c)
    }

    /// Back substitution with the given values for non-pivot columns.
    /// `rhs` is a column index treated as the right-hand side, or `None`
    /// for the homogeneous system.
    pub(crate) fn solve(&self, rhs: Option<usize>, free: &[(usize, Rational)]) -> Vec<Rational> {
        let n = rhs.unwrap_or(self.ncols);
        let mut x = vec![Rational::zero(); n];
        for (c, v) in free {
            x[*c] = v.clone();
        }
        for &(r, c) in self.pivots.iter().rev() {
            if c >= n {
                continue;
            }
            let row = &self.rows[r];
            let mut acc = match rhs {
                Some(b) => Rational::from_integer(row[b].clone()),
                None => Rational::zero(),
            };
            for j in c + 1..n {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[c] = acc / Rational::from_integer(row[c].clone());
        }
        x
    }

    /// One kernel vector per non-pivot column among the first `n`.
    pub(crate) fn kernel(&self, n: usize) -> Vec<Vec<Rational>> {
        (0..n)
            .filter(|&c| !self.is_pivot(c))
            .map(|f| {
                let free: Vec<(usize, Rational)> = (0..n)
                    .filter(|&c| !self.is_pivot(c))
                    .map(|c| (c, if c == f { Rational::one() } else { Rational::zero() }))
                    .collect();
                let mut e = Echelon { rows: self.rows.clone(), pivots: self.pivots.clone(), ncols: n };
                e.pivots.retain(|&(_, c)| c < n);
                e.solve(None, &free)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn solves_square_system() {
        // x + 2y = 5, 3x + 4y = 6
        let e = Echelon::new(&m(&[&[1, 2, 5], &[3, 4, 6]]), 3);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.solve(Some(2), &[]), vec![int(-4), rat(9, 2)]);
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let e = Echelon::new(&m(&[&[1, 2, 3], &[2, 4, 6], &[1, 2, 4]]), 3);
        assert_eq!(e.rank(), 2);
        let k = e.kernel(3);
        assert_eq!(k, vec![vec![int(-2), int(1), int(0)]]);
    }

    #[test]
    fn rational_rows() {
        let rows = vec![vec![rat(1, 2), rat(1, 3), int(1)], vec![rat(1, 4), int(0), rat(1, 2)]];
        let e = Echelon::new(&rows, 3);
        let x = e.solve(Some(2), &[]);
        assert_eq!(x, vec![int(2), int(0)]);
    }
}
