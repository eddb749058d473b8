//! Canonical JSON encodings.
//!
//! Maps are key-sorted, so identical values always serialize to identical
//! bytes.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::series::rational::{format_rational, parse_rational};
use crate::series::{QSeries, Rational, RingElement};
use crate::span::{MembershipReport, MonomialCheck, SpanCertificate, TheoremReport, WeightRule};

/// Note attached to every span certificate.
pub const CERTIFICATE_NOTE: &str = "membership certified up to q^N only";

pub fn qseries_to_json(s: &QSeries) -> Value {
    json!({"N": s.order(), "coeffs": s.coeffs().iter().map(format_rational).collect::<Vec<_>>()})
}

pub fn qseries_from_json(v: &Value) -> Result<QSeries> {
    let bad = |what: &str| Error::Parse(format!("q-series JSON: {what}"));
    let order = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field \"N\""))? as usize;
    let coeffs = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing array field \"coeffs\""))?;
    if coeffs.len() > order + 1 {
        return Err(bad("more coefficients than N + 1"));
    }
    let coeffs = coeffs
        .iter()
        .map(|c| c.as_str().ok_or_else(|| bad("coefficients must be strings")).and_then(parse_rational))
        .collect::<Result<Vec<Rational>>>()?;
    Ok(QSeries::from_coeffs(coeffs, order))
}

/// `{"N", "D", "Y", "terms": {monomial: {y-key: q-series}}}`.
pub fn ring_to_json(p: &RingElement) -> Value {
    let ctx = p.context();
    let t = p.truncation();
    let mut terms = Map::new();
    for (mono, layer) in p.terms() {
        let inner: Map<String, Value> =
            layer.iter().map(|(y, s)| (ctx.format_yexp(y), qseries_to_json(s))).collect();
        terms.insert(ctx.format_mono(mono), Value::Object(inner));
    }
    json!({"N": t.order, "D": t.degree, "Y": t.ybound, "terms": terms})
}

fn coordinates_json(coords: &[(String, Rational)]) -> Value {
    Value::Object(coords.iter().map(|(l, c)| (l.clone(), Value::String(format_rational(c)))).collect())
}

pub fn certificate_to_json(c: &SpanCertificate) -> Value {
    json!({
        "status": c.status,
        "q_order": c.q_order,
        "coordinates": coordinates_json(&c.support()),
        "residual": qseries_to_json(&c.residual),
        "underdetermined": c.underdetermined,
        "note": CERTIFICATE_NOTE,
    })
}

fn check_json(c: &MonomialCheck) -> Value {
    let mut v = json!({
        "monomial": c.monomial,
        "weight": c.weight,
        "basis_size": c.basis_size,
        "pass": c.pass,
        "certificate": certificate_to_json(&c.certificate),
    });
    if let Some((d, b)) = c.degree {
        v["ab_degree"] = json!(d);
        v["ab_degree_bound"] = json!(b);
    }
    v
}

pub fn membership_to_json(r: &MembershipReport) -> Value {
    json!({
        "family": r.family.to_string(),
        "weight_rule": match r.rule { WeightRule::Exact => "exact", WeightRule::AtMost => "at_most" },
        "q_order": r.q_order,
        "pass": r.pass(),
        "checks": r.checks.iter().map(check_json).collect::<Vec<_>>(),
    })
}

pub fn theorem_report_to_json(r: &TheoremReport) -> Value {
    json!({
        "theorem": r.theorem.to_string(),
        "degree": r.degree,
        "pass": r.pass(),
        "constant_term_one": r.constant_term_one,
        "membership": membership_to_json(&r.membership),
    })
}
