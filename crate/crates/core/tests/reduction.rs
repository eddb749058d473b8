use num_traits::Zero;
use proptest::prelude::*;
use qzk_core::reduction::{
    eliminate, eliminate_with, faulhaber, order_decompose, power_sum_eq, power_sum_le, reduce_spec, sumspec_eval,
    BiBracketCombination, ChainSpec, Constraint, Group, ReduceOptions, SumSpec,
};
use qzk_core::series::rational::int;
use qzk_core::series::{QSeries, Rational};
use qzk_core::special::BiBracketIndex;

/// Independent enumeration of `sum_{n_1>..>n_r>=0, n_{r+1}>..>n_{r+s}>=1, d}`
/// with `d_1+..+d_r = d_{r+1}+..+d_{r+s}`, written as nested loops over
/// all `n, d <= N` without pruning.
fn w_oracle(a: &[(u32, u32)], b: &[(u32, u32)], order: usize) -> QSeries {
    let all: Vec<(u32, u32, bool, usize)> = a
        .iter()
        .enumerate()
        .map(|(i, &(u, t))| (u, t, true, i))
        .chain(b.iter().enumerate().map(|(i, &(u, t))| (u, t, false, i)))
        .collect();
    let k = all.len();
    let mut acc = vec![0i128; order + 1];
    let mut n = vec![0usize; k];
    let mut d = vec![1usize; k];
    let nmax = order;
    loop {
        // admissibility
        let mut ok = true;
        for i in 0..k {
            let (_, _, in_a, pos) = all[i];
            if !in_a && n[i] == 0 {
                ok = false;
            }
            if pos > 0 && n[i] >= n[i - 1] {
                ok = false;
            }
        }
        let sa: usize = (0..k).filter(|&i| all[i].2).map(|i| d[i]).sum();
        let sb: usize = (0..k).filter(|&i| !all[i].2).map(|i| d[i]).sum();
        let e: usize = (0..k).map(|i| n[i] * d[i]).sum();
        if ok && sa == sb && e <= order {
            let mut w = 1i128;
            for i in 0..k {
                let (u, t, _, _) = all[i];
                w *= (n[i] as i128).pow(u) * (d[i] as i128).pow(t);
            }
            acc[e] += w;
        }
        // odometer over n in 0..=nmax, d in 1..=order
        let mut j = 0;
        loop {
            if j == 2 * k {
                return QSeries::from_coeffs(acc.into_iter().map(|c| Rational::from_integer(c.into())).collect(), order);
            }
            let (slot, lo, hi) = if j % 2 == 0 { (&mut n[j / 2], 0, nmax) } else { (&mut d[j / 2], 1, order) };
            if *slot < hi {
                *slot += 1;
                break;
            }
            *slot = lo;
            j += 1;
        }
    }
}

fn bb(s: &str) -> BiBracketIndex {
    s.parse().unwrap()
}

#[test]
fn faulhaber_matches_loops() {
    for t in 0..=8u32 {
        let p = faulhaber(t);
        assert_eq!(p.degree(), Some(t as usize + 1));
        assert!(p.coeff(0).is_zero());
        let mut acc = 0i128;
        for n in 0..=50i64 {
            if n > 0 {
                acc += (n as i128).pow(t);
            }
            assert_eq!(p.eval_int(n), Rational::from_integer(acc.into()), "t={t} n={n}");
        }
    }
}

fn brute_power_sum(ts: &[u32], n: i64, eq: bool) -> i128 {
    fn go(ts: &[u32], left: i64, eq: bool) -> i128 {
        match ts.split_first() {
            None => i128::from(!eq || left == 0),
            Some((&t, rest)) => (1..=left).map(|d| (d as i128).pow(t) * go(rest, left - d, eq)).sum(),
        }
    }
    go(ts, n, eq)
}

#[test]
fn power_sums_against_loops() {
    for ts in [vec![1], vec![2], vec![1, 1], vec![2, 1], vec![1, 3], vec![1, 1, 1], vec![2, 1, 2]] {
        let le = power_sum_le(&ts).unwrap();
        let eq = power_sum_eq(&ts).unwrap();
        let r = ts.len();
        let tsum: u32 = ts.iter().sum();
        assert_eq!(le.degree(), Some(tsum as usize + r));
        assert_eq!(eq.degree(), Some(tsum as usize + r - 1));
        assert!(le.coeff(0).is_zero() && eq.coeff(0).is_zero());
        for n in 0..=12 {
            assert_eq!(le.eval_int(n), Rational::from_integer(brute_power_sum(&ts, n, false).into()), "{ts:?} le n={n}");
            assert_eq!(eq.eval_int(n), Rational::from_integer(brute_power_sum(&ts, n, true).into()), "{ts:?} eq n={n}");
        }
    }
    assert_eq!(power_sum_eq(&[1, 1]).unwrap().eval_int(3), int(4));
    assert_eq!(power_sum_le(&[1, 1]).unwrap().eval_int(3), int(5));
    assert_eq!(power_sum_le(&[1, 2]).unwrap().eval_int(1), int(0));
    assert!(power_sum_le(&[0, 1]).is_err());
}

#[test]
fn oracle_agrees_with_loops() {
    for (a, b) in [
        (vec![(0, 1)], vec![(0, 1)]),
        (vec![(1, 0)], vec![(0, 2)]),
        (vec![(0, 1), (1, 1)], vec![(2, 0)]),
        (vec![(0, 0)], vec![(1, 1), (0, 1)]),
    ] {
        let s = SumSpec::w_form(a.clone(), b.clone()).unwrap();
        assert_eq!(sumspec_eval(&s, 7).unwrap(), w_oracle(&a, &b, 7), "{s}");
    }
}

#[test]
fn decompose_free_pair() {
    let s = SumSpec { chains: vec![ChainSpec::free(1, vec![(0, 1), (0, 1)], None)], constraint: Constraint::None };
    let pieces = order_decompose(&s).unwrap();
    let mut total = QSeries::zero(15);
    for (c, p) in &pieces {
        assert!(p.weight() <= s.weight());
        total.add_assign_ref(&sumspec_eval(p, 15).unwrap().scale(c));
    }
    // (sum_{n,d} d q^{nd})^2 over independent pairs
    let mut single = vec![int(0); 16];
    for n in 1..=15 {
        for d in 1..=15 {
            if n * d <= 15 {
                single[n * d] += int(d as i64);
            }
        }
    }
    let single = QSeries::from_coeffs(single, 15);
    assert_eq!(total, &single * &single);
}

#[test]
fn decompose_keeps_groups() {
    let s = SumSpec {
        chains: vec![
            ChainSpec::free(0, vec![(1, 1), (0, 2)], Some(Group::A)),
            ChainSpec::free(1, vec![(0, 1), (1, 0), (0, 0)], Some(Group::B)),
        ],
        constraint: Constraint::Eq,
    };
    let pieces = order_decompose(&s).unwrap();
    let mut total = QSeries::zero(10);
    for (c, p) in &pieces {
        assert_eq!(p.chains[0].group, Some(Group::A));
        assert_eq!(p.chains[1].group, Some(Group::B));
        assert_eq!(p.chains[0].start, 0);
        assert!(p.weight() <= s.weight());
        total.add_assign_ref(&sumspec_eval(p, 10).unwrap().scale(c));
    }
    assert_eq!(total, sumspec_eval(&s, 10).unwrap());
    let (comb, _) = reduce_spec(&s, &ReduceOptions::default()).unwrap();
    assert_eq!(comb.evaluate(10), total);
}

#[test]
fn eliminate_quadratic_example() {
    let s = SumSpec::w_form(vec![(0, 1)], vec![(0, 1)]).unwrap();
    let c = eliminate(&s).unwrap();
    assert_eq!(c, BiBracketCombination::single(bb("[3;1]"), None, int(2)));
    assert_eq!(c.evaluate(15), w_oracle(&[(0, 1)], &[(0, 1)], 15));
}

#[test]
fn eliminate_constant_example() {
    let s = SumSpec::w_form(vec![(0, 0)], vec![(0, 0)]).unwrap();
    let c = eliminate(&s).unwrap();
    assert!(c.max_weight().unwrap() <= 2);
    assert_eq!(c.evaluate(15), w_oracle(&[(0, 0)], &[(0, 0)], 15));
}

#[test]
fn eliminate_rejects_empty_group() {
    let s = SumSpec::new(vec![ChainSpec::strict(0, vec![(0, 1)], Some(Group::A))], Constraint::Eq).unwrap();
    assert!(eliminate(&s).is_err());
}

#[test]
fn depth_guard_trips() {
    let s = SumSpec::w_form(vec![(0, 1), (1, 1)], vec![(0, 1), (0, 1)]).unwrap();
    let opts = ReduceOptions { max_depth: 1, ..Default::default() };
    assert!(eliminate_with(&s, &opts).is_err());
}

#[test]
fn step_certification_on_mixed_shapes() {
    let opts = ReduceOptions { certify_order: Some(12), ..Default::default() };
    for (a, b) in [(vec![(1, 1), (0, 2)], vec![(2, 1)]), (vec![(0, 1)], vec![(1, 2), (1, 1)]), (vec![(1, 0), (0, 0)], vec![(0, 0), (2, 2)])] {
        let s = SumSpec::w_form(a, b).unwrap();
        let (c, stats) = eliminate_with(&s, &opts).unwrap();
        assert_eq!(stats.certified_steps, stats.steps);
        assert_eq!(c.evaluate(12), sumspec_eval(&s, 12).unwrap(), "{s}");
    }
}

fn exps(len: usize) -> impl Strategy<Value = Vec<(u32, u32)>> {
    prop::collection::vec((0u32..=2, 1u32..=2), len)
}

fn w_shapes() -> impl Strategy<Value = (Vec<(u32, u32)>, Vec<(u32, u32)>)> {
    (1usize..=3, 1usize..=3).prop_filter("r + s <= 4", |(r, s)| r + s <= 4).prop_flat_map(|(r, s)| (exps(r), exps(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn positive_t_outputs_lie_in_qbd((a, b) in w_shapes()) {
        let spec = SumSpec::w_form(a, b).unwrap();
        let c = eliminate(&spec).unwrap();
        prop_assert!(c.factors_in_qbd(), "{}: {}", spec, c);
        prop_assert!(c.max_weight().unwrap_or(0) <= spec.weight());
        prop_assert_eq!(c.evaluate(10), sumspec_eval(&spec, 10).unwrap());
    }
}
