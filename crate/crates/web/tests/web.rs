use serde_json::Value;

use qzk_web::{bracket_series, eisenstein_series, trace_coefficient, zvalue_series};

fn coeffs(s: &str) -> Vec<String> {
    let v: Value = serde_json::from_str(s).unwrap();
    v["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect()
}

/// sigma_{k}(n) by trial division.
fn sigma(k: u32, n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.pow(k)).sum()
}

#[test]
fn bracket_two_is_sigma_one() {
    let expect: Vec<String> = (0..=8).map(|n| sigma(1, n).to_string()).collect();
    assert_eq!(coeffs(&bracket_series("2", 8).unwrap()), expect);
    assert_eq!(coeffs(&bracket_series("[2;0]", 8).unwrap()), expect);
    let v: Value = serde_json::from_str(&bracket_series("3,1;1,0", 4).unwrap()).unwrap();
    assert_eq!(v["label"], "[3,1;1,0]");
}

#[test]
fn zvalue_and_eisenstein() {
    assert_eq!(coeffs(&zvalue_series("2", 6).unwrap()), ["0", "1", "3", "4", "7", "6", "12"]);
    assert_eq!(coeffs(&eisenstein_series(2, 2).unwrap()), ["-1/24", "1", "3"]);
    assert!(zvalue_series("1", 5).is_err());
    assert!(zvalue_series("2,x", 5).is_err());
}

#[test]
fn trace_coefficient_is_minus_bracket() {
    let expect: Vec<String> = (0..=10).map(|n| if n == 0 { "0".into() } else { format!("-{}", sigma(1, n)) }).collect();
    assert_eq!(coeffs(&trace_coefficient(1, 1, 10).unwrap()), expect);
    assert!(trace_coefficient(1, 1, 500).is_err());
}

#[test]
fn order_limit() {
    assert!(bracket_series("2", 10_000).is_err());
}
