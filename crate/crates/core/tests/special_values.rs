use num_traits::Zero;
use qzk_core::series::rational::{factorial, int, rat};
use qzk_core::series::{QSeries, Rational};
use qzk_core::special::{bibracket, bibracket_eulerian, bracket, eisenstein, zvalue, BiBracketIndex, BracketIndex};

fn br(s: &[u32]) -> QSeries {
    bracket(&BracketIndex::new(s.to_vec()).unwrap(), 40)
}

fn z(s: &[u32]) -> QSeries {
    zvalue(s, 40).unwrap()
}

#[test]
fn z_values_in_brackets() {
    assert_eq!(z(&[2]), br(&[2]));
    assert_eq!(z(&[3]), br(&[3]).scale(&int(2)));
    assert_eq!(z(&[4]), &br(&[4]) - &br(&[2]).scale(&rat(1, 6)));
}

#[test]
fn eisenstein_in_z_values() {
    let n = 40;
    let c = |x: Rational| QSeries::constant(x, n);
    assert_eq!(eisenstein(2, n).unwrap(), &c(rat(-1, 24)) + &z(&[2]));
    let g4 = eisenstein(4, n).unwrap();
    assert_eq!(g4, &(&c(rat(1, 1440)) + &z(&[2]).scale(&rat(1, 6))) + &z(&[4]));
    // With the two Z-coefficients exchanged the q^1 coefficient would be 1, not 1/6.
    assert_ne!(g4, &(&c(rat(1, 1440)) + &z(&[2])) + &z(&[4]).scale(&rat(1, 6)));
    assert_eq!(
        eisenstein(6, n).unwrap(),
        &(&(&c(rat(-1, 60480)) + &z(&[2]).scale(&rat(1, 120))) + &z(&[4]).scale(&rat(1, 4))) + &z(&[6])
    );
}

/// All bi-bracket indices of weight exactly `w`.
fn indices_of_weight(w: u32) -> Vec<BiBracketIndex> {
    fn go(rest: u32, s: &mut Vec<u32>, r: &mut Vec<u32>, out: &mut Vec<BiBracketIndex>) {
        if rest == 0 {
            out.push(BiBracketIndex::new(s.clone(), r.clone()).unwrap());
            return;
        }
        for si in 1..=rest {
            for ri in 0..=rest - si {
                s.push(si);
                r.push(ri);
                go(rest - si - ri, s, r, out);
                s.pop();
                r.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(w, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

#[test]
fn dual_formula_agreement() {
    let n = 30;
    let mut count = 0;
    for w in 0..=6 {
        for idx in indices_of_weight(w) {
            assert_eq!(bibracket(&idx, n), bibracket_eulerian(&idx, n).unwrap(), "{idx}");
            count += 1;
        }
    }
    assert!(count > 100);
}

#[test]
fn bracket_from_geometric_sums() {
    let n = 30;
    for s in 1..=6u32 {
        let mut sum = QSeries::zero(n);
        for d in 1..=n {
            // d^{s-1} q^d/(1-q^d)
            let g = QSeries::geometric(d, 1, n).unwrap();
            sum.add_assign_ref(&g.scale(&int((d as i64).pow(s - 1))));
        }
        let expected = sum.scale(&Rational::new(1.into(), factorial(s - 1)));
        assert_eq!(bracket(&BracketIndex::new(vec![s]).unwrap(), n), expected);
    }
}

#[test]
fn single_bibrackets_reduce_to_brackets() {
    for s in 1..=4 {
        let b = bibracket(&BiBracketIndex::new(vec![s], vec![0]).unwrap(), 20);
        assert_eq!(b, bracket(&BracketIndex::new(vec![s]).unwrap(), 20));
    }
}

#[test]
fn truncation_prefix_stability() {
    for s in [vec![1], vec![2, 1], vec![3, 1, 2]] {
        let idx = BracketIndex::new(s).unwrap();
        let short = bracket(&idx, 15);
        let long = bracket(&idx, 25);
        assert!(short.is_prefix_of(&long));
    }
    let short = zvalue(&[3, 2], 12).unwrap();
    let long = zvalue(&[3, 2], 22).unwrap();
    assert!(short.is_prefix_of(&long));
}

#[test]
fn qbd_flag_ignores_expansion() {
    let idx = BiBracketIndex::new(vec![1, 2], vec![3, 0]).unwrap();
    assert!(!idx.in_qbd());
    assert!(!bibracket(&idx, 10).is_zero());
    assert!(BiBracketIndex::new(vec![2, 1], vec![0, 0]).unwrap().in_qbd());
}

#[test]
fn z_depth_two_matches_definition() {
    // Oracle: direct double sum over n1 > n2 of the odd kernels.
    let n = 16;
    let ker = |s: u32, m: usize| -> QSeries {
        let geo = QSeries::geometric(m, 0, n).unwrap();
        let mut den = QSeries::one(n);
        for _ in 0..s {
            den = &den * &geo;
        }
        let num = if s % 2 == 0 {
            QSeries::monomial(m * s as usize / 2, int(1), n)
        } else {
            let h = m * (s as usize - 1) / 2;
            &QSeries::monomial(h, int(1), n) + &QSeries::monomial(h + m, int(1), n)
        };
        &num * &den
    };
    let mut oracle = QSeries::zero(n);
    for n1 in 1..=n {
        for n2 in 1..n1 {
            oracle.add_assign_ref(&(&ker(3, n1) * &ker(2, n2)));
        }
    }
    assert_eq!(zvalue(&[3, 2], n).unwrap(), oracle);
    assert!(!oracle.coeff(3).is_zero());
}
