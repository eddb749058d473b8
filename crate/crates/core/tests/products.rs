use num_traits::Zero;
use qzk_core::products::{
    build_trace, poch_log, poch_product, trace_y0, LinearForm, PochFactor, Power, TraceKind, TraceSpec,
};
use qzk_core::series::rational::{int, rat};
use qzk_core::series::{QSeries, Rational, Ring, RingElement, Truncation};
use qzk_core::special::{bibracket, bracket, BiBracketIndex, BracketIndex};

fn br(s: u32, n: usize) -> QSeries {
    bracket(&BracketIndex::new(vec![s]).unwrap(), n)
}

fn lemma31(n: usize, d: u32) -> RingElement {
    build_trace(&TraceSpec::new(TraceKind::Lemma31, Truncation::with_default_y(n, d))).unwrap()
}

#[test]
fn lemma31_small_coefficients() {
    let n = 20;
    let p = lemma31(n, 4);
    assert_eq!(p.series_coeff("1").unwrap(), QSeries::one(n));
    assert_eq!(p.series_coeff("z*w").unwrap(), -&br(2, n));
    assert_eq!(p.series_coeff("z^2*w").unwrap(), -&br(3, n));
    assert_eq!(p.series_coeff("z*w^2").unwrap(), -&br(3, n));
    assert_eq!(p.series_coeff("z^3*w").unwrap(), -&br(4, n));
    assert_eq!(p.series_coeff("z*w^3").unwrap(), -&br(4, n));
    let b2 = br(2, n);
    let mixed = &(&b2 * &b2).scale(&rat(1, 2)) - &br(4, n).scale(&rat(3, 2));
    assert_eq!(p.series_coeff("z^2*w^2").unwrap(), mixed);
    for m in ["z", "w", "z^2", "w^3", "z^4"] {
        assert!(p.series_coeff(m).unwrap().is_zero(), "{m}");
    }
}

#[test]
fn lemma31_edge_coefficients() {
    let n = 20;
    let p = lemma31(n, 6);
    for m in 2..=6u32 {
        let target = -&br(m, n);
        let a = if m == 2 { "z*w".to_string() } else { format!("z^{}*w", m - 1) };
        let b = if m == 2 { "z*w".to_string() } else { format!("z*w^{}", m - 1) };
        assert_eq!(p.series_coeff(&a).unwrap(), target, "{a}");
        assert_eq!(p.series_coeff(&b).unwrap(), target, "{b}");
    }
}

#[test]
fn bloch_okounkov_is_even() {
    let p = build_trace(&TraceSpec::new(TraceKind::BlochOkounkov, Truncation::with_default_y(20, 6))).unwrap();
    for k in [1, 3, 5] {
        assert!(p.coeff(&[k]).is_zero(), "z^{k}");
    }
    assert!(!p.coeff(&[2]).is_zero());
    assert_eq!(p.series_coeff("1").unwrap(), QSeries::one(20));
}

#[test]
fn theorem32_constant_term() {
    for r in 1..=3 {
        let p = build_trace(&TraceSpec::new(TraceKind::Theorem32(r), Truncation::with_default_y(10, 3))).unwrap();
        assert_eq!(p.series_coeff("1").unwrap(), QSeries::one(10));
        if r == 1 {
            assert_eq!(p.num_terms(), 1);
        }
    }
}

#[test]
fn log_of_shifted_factor_gives_minus_bracket_one() {
    let ring = Ring::new(&["z"], &[], &[], Truncation::new(10, 2, 10));
    let f = PochFactor::new(LinearForm::var("z"), vec![], 1, Power::Int(1)).unwrap();
    let l = poch_log(&f, &ring).unwrap();
    assert_eq!(l.series_coeff("z").unwrap(), -&br(1, 10));
    assert!(l.scale(&Rational::zero()).is_zero());
}

#[test]
fn formal_power_linear_coefficient() {
    // ((x y)_inf / (y)_inf)^a, coefficient of a z is -sum_{n>=0,d>=1} y^d q^{nd}
    let n = 6;
    let ring = Ring::new(&["z"], &["a"], &["y"], Truncation::new(n, 3, 6));
    let fs = [
        PochFactor::new(LinearForm::var("z"), vec![1], 0, Power::Formal { var: "a".into(), sign: 1 }).unwrap(),
        PochFactor::new(LinearForm::zero(), vec![1], 0, Power::Formal { var: "a".into(), sign: -1 }).unwrap(),
    ];
    let p = poch_product(&fs, &ring).unwrap();
    let layer = p.coeff_str("a*z").unwrap();
    for d in 1..=6i32 {
        let mut oracle = QSeries::zero(n);
        for k in 0..=n {
            if k % d as usize == 0 {
                oracle.set_coeff(k, int(-1));
            }
        }
        assert_eq!(layer.terms.get(&vec![d]).cloned().unwrap_or(QSeries::zero(n)), oracle, "y^{d}");
    }
    assert!(layer.terms.keys().all(|e| e[0] >= 1));
}

#[test]
fn direct_product_matches_exp_of_logs() {
    let ring = Ring::new(&["z", "w"], &[], &["y"], Truncation::new(12, 3, 12));
    let sets: Vec<Vec<(LinearForm, i32, usize, i32)>> = vec![
        vec![(LinearForm::var("z"), 0, 1, 1), (LinearForm::var("w"), 1, 1, -1)],
        vec![(LinearForm::from_pairs([("z", 1), ("w", -2)]), -1, 2, 1), (LinearForm::zero(), 1, 1, -1)],
        vec![(LinearForm::var("w"), 1, 0, -1), (LinearForm::var("z"), 2, 0, 1), (LinearForm::zero(), 1, 1, 1)],
    ];
    for set in sets {
        let fs: Vec<PochFactor> = set
            .iter()
            .map(|(l, y, c, p)| PochFactor::new(l.clone(), vec![*y], *c, Power::Int(*p)).unwrap())
            .collect();
        let direct = poch_product(&fs, &ring).unwrap();
        let mut log = ring.zero();
        for f in &fs {
            let l = poch_log(f, &ring).unwrap();
            log = if matches!(f.power, Power::Int(p) if p > 0) { log.add(&l) } else { log.sub(&l) };
        }
        // split off the q^0 y^0 degree-0 constant, which is zero here
        assert!(log.constant_coeff().is_zero());
        let via_log = log.exp_truncated().unwrap();
        // either every y-exponent is paid for with a power of q, or all
        // exponents are nonnegative, so the y-bound cuts both sides alike
        assert_eq!(direct, via_log);
    }
}

fn pn(players: u32, with_ab: bool, n: usize, d: u32) -> TraceSpec {
    TraceSpec::new(TraceKind::PN { players, with_ab }, Truncation::with_default_y(n, d))
}

#[test]
fn pn_constant_term() {
    let p = trace_y0(&pn(2, false, 8, 2)).unwrap();
    assert_eq!(p.series_coeff("1").unwrap(), QSeries::one(8));
    let zeroed = p.set_zero(&["z1_12", "z2_12", "v1_12", "v2_12"]);
    assert_eq!(zeroed.num_terms(), 1);
}

#[test]
fn pn_y0_coefficient_matches_bibracket() {
    let n = 10;
    let p = trace_y0(&pn(2, false, n, 4)).unwrap();
    let c = p.series_coeff("z1_12*z2_12*v1_12*v2_12").unwrap();
    // oracle: sum_{n1>=0, n2>=1, d>=1} d^2 q^{(n1+n2) d}
    let mut oracle = QSeries::zero(n);
    for d in 1..=n {
        for n1 in 0..=n {
            for n2 in 1..=n {
                let e = (n1 + n2) * d;
                if e <= n {
                    oracle.set_coeff(e, oracle.coeff(e) + int((d * d) as i64));
                }
            }
        }
    }
    assert_eq!(c, oracle);
    let b31 = bibracket(&BiBracketIndex::new(vec![3], vec![1]).unwrap(), n);
    assert_eq!(c, b31.scale(&int(2)));
}

#[test]
fn split_y0_matches_full_expansion() {
    for with_ab in [false, true] {
        let n = 5;
        let spec = pn(2, with_ab, n, 2);
        let split = trace_y0(&spec).unwrap();
        let mut wide = spec.clone();
        wide.trunc = Truncation::new(n, 2, 4 * n as u32);
        let full = build_trace(&wide).unwrap().y0_coefficient().unwrap();
        assert_eq!(split.terms(), full.terms(), "with_ab = {with_ab}");
    }
}

#[test]
fn y_bound_saturation_soundness() {
    // Unsaturated results must not change when the bound is raised.
    let spec = TraceSpec::new(TraceKind::PN { players: 2, with_ab: false }, Truncation::new(4, 2, 4));
    let p = build_trace(&spec).unwrap();
    let mut wider = spec.clone();
    wider.trunc.ybound += 5;
    let q = build_trace(&wider).unwrap();
    let y0p = p.y0_coefficient().unwrap();
    let y0q = q.y0_coefficient().unwrap();
    assert_eq!(y0p.terms(), y0q.terms());
    if !p.saturated() {
        assert_eq!(p.terms(), q.terms());
    }
}

#[test]
fn ab_specialization() {
    let n = 6;
    let with = trace_y0(&pn(2, true, n, 3)).unwrap();
    let without = trace_y0(&pn(2, false, n, 3)).unwrap();
    let specialized = with.set_zero(&["a", "b"]);
    let embedded = without.in_context(specialized.context()).unwrap();
    assert_eq!(specialized, embedded);
    // degree in a and b never exceeds the degree in the single variables
    for m in with.terms().keys() {
        let ab = with.degree_in(m, &["a", "b"]);
        let singles = with.degree_in(m, &["z1", "z2", "v1", "v2"]);
        assert!(ab <= singles);
    }
}
