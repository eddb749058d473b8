//! Coefficient sequences for the browser demo.
//!
//! Every export returns a JSON string `{"label", "N", "coeffs"}` with
//! coefficients as exact `"p/q"` strings.

use serde_json::json;
use wasm_bindgen::prelude::*;

use qzk_core::json::qseries_to_json;
use qzk_core::products::{build_trace, TraceKind, TraceSpec};
use qzk_core::series::{QSeries, Truncation};
use qzk_core::special::{bibracket, eisenstein, zvalue, BiBracketIndex};

/// Largest q-order the page may request.
pub const MAX_ORDER: usize = 200;

fn check_order(order: usize) -> Result<(), String> {
    if order > MAX_ORDER {
        return Err(format!("q-order {order} exceeds the demo limit {MAX_ORDER}"));
    }
    Ok(())
}

fn labelled(label: String, s: &QSeries) -> String {
    let mut v = qseries_to_json(s);
    v["label"] = json!(label);
    v.to_string()
}

/// A bi-bracket index such as `3,1;1,0` or a bracket `3,1`.
pub fn bracket_series(index: &str, order: usize) -> Result<String, String> {
    check_order(order)?;
    let t = index.trim().trim_start_matches('[').trim_end_matches(']');
    let idx: BiBracketIndex = if t.contains(';') || t.contains(':') {
        t.parse().map_err(|e: qzk_core::Error| e.to_string())?
    } else {
        let s: Vec<u32> = t
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse().map_err(|_| format!("bad entry {x:?}")))
            .collect::<Result<_, _>>()?;
        let r = vec![0; s.len()];
        BiBracketIndex::new(s, r).map_err(|e| e.to_string())?
    };
    Ok(labelled(idx.to_string(), &bibracket(&idx, order)))
}

/// `Z(s_1, ..., s_k)` from comma-separated entries.
pub fn zvalue_series(entries: &str, order: usize) -> Result<String, String> {
    check_order(order)?;
    let s: Vec<u32> = entries
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| format!("bad entry {x:?}")))
        .collect::<Result<_, _>>()?;
    let z = zvalue(&s, order).map_err(|e| e.to_string())?;
    let label = format!("Z({})", s.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    Ok(labelled(label, &z))
}

pub fn eisenstein_series(k: u32, order: usize) -> Result<String, String> {
    check_order(order)?;
    Ok(labelled(format!("G{k}"), &eisenstein(k, order).map_err(|e| e.to_string())?))
}

/// The coefficient of `z^m w^n` in `(q)(xyq)/((xq)(yq))`, `x = e^z`, `y = e^w`.
pub fn trace_coefficient(m: u32, n: u32, order: usize) -> Result<String, String> {
    if order > 60 || m + n > 8 {
        return Err("trace coefficients are limited to q-order 60 and degree 8".into());
    }
    let p = build_trace(&TraceSpec::new(TraceKind::Lemma31, Truncation::with_default_y(order, m + n)))
        .map_err(|e| e.to_string())?;
    Ok(labelled(format!("coefficient of z^{m} w^{n}"), &p.coeff(&[m, n]).y0_part()))
}

#[wasm_bindgen]
pub fn bracket(index: &str, order: usize) -> Result<String, JsError> {
    bracket_series(index, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = zValue)]
pub fn z_value(entries: &str, order: usize) -> Result<String, JsError> {
    zvalue_series(entries, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = eisensteinSeries)]
pub fn eisenstein_js(k: u32, order: usize) -> Result<String, JsError> {
    eisenstein_series(k, order).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = traceCoefficient)]
pub fn trace_coefficient_js(m: u32, n: u32, order: usize) -> Result<String, JsError> {
    trace_coefficient(m, n, order).map_err(|e| JsError::new(&e))
}
