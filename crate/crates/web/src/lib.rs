//! Browser bindings: factorise a matrix, certify a family over a range of
//! orders, and tabulate `delta_N` over a grid of circle radii.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;
use whstab::criterion::{certify_stability, first_certified, ZetaMode};
use whstab::io::parse_stream_spec;
use whstab::laurent::LaurentMatrix2;
use whstab::normalise::NormaliseMode;
use whstab::tail::delta_n_f64;

pub fn factor_json(input: &str, normalise: &str) -> Result<String, String> {
    let a: LaurentMatrix2 = serde_json::from_str(input).map_err(|e| format!("bad matrix JSON: {e}"))?;
    let mode: NormaliseMode = normalise.parse().map_err(|e: whstab::Error| e.to_string())?;
    whstab::cli::factorise_json(&a, mode).map_err(|e| e.to_string())
}

pub fn certify_json(spec: &str, n_max: u32) -> Result<String, String> {
    if !(1..=40).contains(&n_max) {
        return Err("choose N between 1 and 40".into());
    }
    let problem = parse_stream_spec(spec).map_err(|e| e.to_string())?;
    let zeta = problem.zeta.clone().ok_or("give zeta1 and zeta2")?;
    let orders: Vec<u64> = (1..=u64::from(n_max)).collect();
    let analyses = certify_stability(&problem.model, &orders, &ZetaMode::Fixed(zeta), NormaliseMode::Auto, 1).map_err(|e| e.to_string())?;
    let reports: Vec<_> = analyses.into_iter().map(|a| a.report).collect();
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "delta": r.delta_n.to_f64(),
                "inv_plus": r.norm_inv_plus.to_f64(),
                "inv_minus": r.norm_inv_minus.to_f64(),
                "q": r.q_n.to_f64(),
                "indices": [r.indices.0, r.indices.1],
                "verdict": r.verdict.to_string(),
            })
        })
        .collect();
    Ok(json!({ "label": problem.label, "first_certified": first_certified(&reports), "rows": rows }).to_string())
}

/// `log10 delta_N` on a `steps x steps` grid, row-major with `zeta1` varying
/// fastest; NaN where the bound is infinite or the circles are inadmissible.
pub fn delta_grid(spec: &str, n: u32, zeta1: (f64, f64), zeta2: (f64, f64), steps: usize) -> Result<Vec<f64>, String> {
    if !(2..=200).contains(&steps) {
        return Err("steps must lie between 2 and 200".into());
    }
    let problem = parse_stream_spec(spec).map_err(|e| e.to_string())?;
    let at = |(lo, hi): (f64, f64), i: usize| lo + (hi - lo) * i as f64 / (steps - 1) as f64;
    let mut out = Vec::with_capacity(steps * steps);
    for j in 0..steps {
        for i in 0..steps {
            let d = delta_n_f64(&problem.model, u64::from(n), at(zeta1, i), at(zeta2, j));
            out.push(d.filter(|d| *d > 0.0).map_or(f64::NAN, f64::log10));
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn factor(input: &str, normalise: &str) -> Result<String, JsError> {
    factor_json(input, normalise).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn certify(spec: &str, n_max: u32) -> Result<String, JsError> {
    certify_json(spec, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = deltaSurface)]
#[allow(clippy::too_many_arguments)]
pub fn delta_surface(spec: &str, n: u32, z1_lo: f64, z1_hi: f64, z2_lo: f64, z2_hi: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    delta_grid(spec, n, (z1_lo, z1_hi), (z2_lo, z2_hi), steps).map_err(|e| JsError::new(&e))
}
