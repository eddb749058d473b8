use num_traits::Zero;
use proptest::prelude::*;
use qzk_core::series::rational::{int, rat};
use qzk_core::series::{QSeries, Rational};
use qzk_core::span::{
    enumerate_basis, enumerate_basis_exact, express, find_relations, verify_theorem, SpanStatus, Theorem,
};
use qzk_core::special::{bibracket, bracket, zvalue, BiBracketIndex, BracketIndex, FamilyTag};
use qzk_core::products::{build_trace, TraceKind, TraceSpec};
use qzk_core::series::Truncation;

fn br(s: &[u32], n: usize) -> QSeries {
    bracket(&BracketIndex::new(s.to_vec()).unwrap(), n)
}

/// Sum of divisor powers computed by trial division.
fn sigma_series(k: u32, n: usize) -> QSeries {
    let c = (0..=n)
        .map(|m| if m == 0 { int(0) } else { Rational::from_integer((1..=m).filter(|d| m % d == 0).map(|d| (d as i64).pow(k)).sum::<i64>().into()) })
        .collect();
    QSeries::from_coeffs(c, n)
}

#[test]
fn lemma31_zw_is_minus_z2() {
    let n = 20;
    let p = build_trace(&TraceSpec::new(TraceKind::Lemma31, Truncation::with_default_y(n, 2))).unwrap();
    let basis = enumerate_basis_exact(FamilyTag::QMzv, 2, n).unwrap();
    let cert = express(&p.series_coeff("z*w").unwrap(), &basis, n).unwrap();
    assert!(cert.is_member());
    assert_eq!(cert.support(), vec![("Z(2)".to_string(), int(-1))]);
    assert_eq!(zvalue(&[2], n).unwrap(), sigma_series(1, n));
}

#[test]
fn recovers_bracket_combination() {
    let n = 24;
    let target = &br(&[2], n).scale(&int(3)) - &br(&[1, 1], n).scale(&rat(1, 2));
    let cert = express(&target, &enumerate_basis(FamilyTag::Md, 2, n).unwrap(), n).unwrap();
    assert!(cert.is_member());
    assert!(!cert.underdetermined);
    assert_eq!(cert.support(), vec![("[2]".to_string(), int(3)), ("[1,1]".to_string(), rat(-1, 2))]);
}

#[test]
fn refutes_outside_the_span() {
    let n = 20;
    // sigma_3 has weight 4; nothing of weight <= 2 reaches it
    let cert = express(&sigma_series(3, n), &enumerate_basis(FamilyTag::Md, 2, n).unwrap(), n).unwrap();
    assert_eq!(cert.status, SpanStatus::RefutedAtOrder);
    assert!(!cert.residual.is_zero());
}

#[test]
fn duality_relation_found() {
    let n = 20;
    let basis = enumerate_basis_exact(FamilyTag::Bd, 2, n).unwrap();
    let labels: Vec<&str> = basis.iter().map(|b| b.label.as_str()).collect();
    let rels = find_relations(&basis, n).unwrap();
    assert_eq!(rels.len(), 1);
    let i = labels.iter().position(|&l| l == "[2;0]").unwrap();
    let j = labels.iter().position(|&l| l == "[1;1]").unwrap();
    let rel = &rels[0];
    assert!(!rel[i].is_zero());
    assert_eq!(&rel[i] + &rel[j], int(0));
    for (k, c) in rel.iter().enumerate() {
        assert!(k == i || k == j || c.is_zero());
    }
    let two_zero = bibracket(&"[2;0]".parse::<BiBracketIndex>().unwrap(), n);
    let one_one = bibracket(&"[1;1]".parse::<BiBracketIndex>().unwrap(), n);
    assert_eq!(two_zero, one_one);
}

#[test]
fn quasimodular_monomials_independent() {
    let basis = enumerate_basis(FamilyTag::Qm, 8, 40).unwrap();
    assert!(find_relations(&basis, 40).unwrap().is_empty());
}

#[test]
fn lemma31_degree_four_certificates() {
    let r = verify_theorem(Theorem::Lemma31, 4, None, None).unwrap();
    assert!(r.constant_term_one);
    assert_eq!(r.membership.checks.len(), 15);
    assert!(r.pass());
    let zw = r.membership.checks.iter().find(|c| c.monomial == "z*w").unwrap();
    assert_eq!(zw.certificate.support(), vec![("[2]".to_string(), int(-1))]);
}

#[test]
fn theorem32_exact_weight() {
    for r in 1..=3 {
        let rep = verify_theorem(Theorem::Theorem32(r), 3, None, None).unwrap();
        assert!(rep.pass(), "r = {r}");
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coordinates_round_trip(coeffs in prop::collection::vec(small_rational(), 7)) {
        let n = 30;
        let basis = enumerate_basis(FamilyTag::Qm, 6, n).unwrap();
        prop_assert_eq!(basis.len(), 7);
        let mut target = QSeries::zero(n);
        for (b, c) in basis.iter().zip(&coeffs) {
            target.add_assign_ref(&b.series.scale(c));
        }
        let cert = express(&target, &basis, n).unwrap();
        prop_assert!(cert.is_member());
        let got: Vec<Rational> = cert.coordinates.iter().map(|(_, c)| c.clone()).collect();
        prop_assert_eq!(got, coeffs);
    }

    #[test]
    fn residual_is_target_minus_combination(shift in 0usize..4, c in small_rational()) {
        let n = 16;
        let basis = enumerate_basis(FamilyTag::QMd, 3, n).unwrap();
        let target = sigma_series(3, n).shift(shift).scale(&c);
        let cert = express(&target, &basis, n).unwrap();
        let mut r = target.clone();
        for (b, (_, x)) in basis.iter().zip(&cert.coordinates) {
            r.sub_assign_ref(&b.series.scale(x));
        }
        prop_assert_eq!(&r, &cert.residual);
        prop_assert_eq!(cert.is_member(), r.is_zero());
    }
}
