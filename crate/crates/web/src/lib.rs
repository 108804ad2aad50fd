//! wasm-bindgen surface for the browser demo: three interactive
//! operations backed by the core pipeline.
//!
//! Build with `wasm-pack build crates/web --target web` (or
//! `cargo build -p cpkit-web --target wasm32-unknown-unknown` plus
//! `wasm-bindgen`); `crates/web/www/index.html` loads the output.

use std::collections::BTreeMap;

use serde_json::json;
use wasm_bindgen::prelude::*;

use cpkit_core::assignment::build_assignment;
use cpkit_core::cpclass::{classify_dynamical_map, ClassifyOptions};
use cpkit_core::dynmaps::{build_dynamical_map, physical_domain_membership, DomainVerdict};
use cpkit_core::feasibility::SolverCaps;
use cpkit_core::gallery::{carteret_choi_formula, list_cases, make_carteret};
use cpkit_core::linalg::{eigh, paulis, CMatrix};
use cpkit_core::report::run_gallery;

fn err_to_js(e: impl std::fmt::Display) -> JsValue {
    JsValue::from_str(&e.to_string())
}

/// Explore the correlated-pair family at one parameter point: Choi
/// matrix, spectrum, CP verdict, closed-form agreement, and the
/// predicted physical-domain radius.
#[wasm_bindgen]
pub fn carteret_explore(a: f64, theta: f64) -> Result<String, JsValue> {
    let case = make_carteret(a, theta).map_err(err_to_js)?;
    let am = build_assignment(&case.subspace).map_err(err_to_js)?;
    let u = case.unitary.as_ref().expect("carteret fixes a unitary");
    let psi = build_dynamical_map(&am, u).map_err(err_to_js)?;
    let choi = psi.choi_matrix();
    let dec = eigh(choi).map_err(err_to_js)?;
    let formula_gap = choi.sub(&carteret_choi_formula(a, theta)).max_abs();
    let verdict = classify_dynamical_map(&psi, &ClassifyOptions::fast(1));

    let radius = if a >= 0.0 {
        ((1.0 + a) * (1.0 - 3.0 * a)).max(0.0).sqrt()
    } else {
        1.0 + a
    };
    let entries: Vec<[f64; 2]> = choi.data().iter().map(|z| [z.re, z.im]).collect();
    let out = json!({
        "a": a,
        "theta": theta,
        "choi": {"rows": choi.rows(), "cols": choi.cols(), "data": entries},
        "eigenvalues": dec.eigenvalues,
        "minEigenvalue": dec.eigenvalues[0],
        "cp": verdict.cp,
        "cpte": verdict.cpte,
        "cpze": verdict.cpze,
        "formulaGap": formula_gap,
        "domainRadius": radius,
        "cpThresholdA": 0.5 / 3f64.sqrt(),
    });
    Ok(out.to_string())
}

/// Scan physical-domain membership along a Bloch-sphere direction,
/// returning (radius, verdict) pairs and the closed-form radius.
#[wasm_bindgen]
pub fn carteret_domain_scan(a: f64, samples: usize) -> Result<String, JsValue> {
    let case = make_carteret(a, 0.0).map_err(err_to_js)?;
    let (_, _, sz) = paulis();
    let predicted = if a >= 0.0 {
        ((1.0 + a) * (1.0 - 3.0 * a)).max(0.0).sqrt()
    } else {
        1.0 + a
    };
    let mut points = Vec::new();
    let n = samples.clamp(3, 200);
    for k in 0..n {
        let r = (k as f64 + 0.5) / n as f64;
        let state = CMatrix::identity(2).add(&sz.scale_re(r)).scale_re(0.5);
        let q = physical_domain_membership(&case.subspace, &state, SolverCaps::fast())
            .map_err(err_to_js)?;
        let verdict = match q.verdict {
            DomainVerdict::Inside => "inside",
            DomainVerdict::Outside => "outside",
            DomainVerdict::Undetermined => "undetermined",
        };
        points.push(json!({"radius": r, "verdict": verdict}));
    }
    Ok(json!({"a": a, "predictedRadius": predicted, "points": points}).to_string())
}

/// Names and default parameters of the gallery cases.
#[wasm_bindgen]
pub fn gallery_names() -> String {
    let infos: Vec<_> = list_cases()
        .into_iter()
        .map(|i| {
            json!({
                "name": i.name,
                "summary": i.summary,
                "parameters": i.parameters.iter().map(|(k, v)| json!({"name": k, "default": v})).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::Value::Array(infos).to_string()
}

/// Run one gallery case through the analysis pipeline; `params_json` is
/// a flat `{name: value}` object.
#[wasm_bindgen]
pub fn gallery_run_json(
    name: &str,
    params_json: &str,
    seed: u64,
    samples: usize,
) -> Result<String, JsValue> {
    let params: BTreeMap<String, f64> = if params_json.trim().is_empty() {
        BTreeMap::new()
    } else {
        serde_json::from_str(params_json).map_err(err_to_js)?
    };
    let report = run_gallery(name, &params, seed, samples, None).map_err(err_to_js)?;
    serde_json::to_string(&report).map_err(err_to_js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explore_reports_cp_transition() {
        let theta = std::f64::consts::FRAC_PI_6;
        let below: serde_json::Value =
            serde_json::from_str(&carteret_explore(0.2, theta).unwrap()).unwrap();
        assert_eq!(below["cp"], "yes");
        let above: serde_json::Value =
            serde_json::from_str(&carteret_explore(0.35, theta).unwrap()).unwrap();
        assert_eq!(above["cp"], "no");
        assert!(above["minEigenvalue"].as_f64().unwrap() < -1e-6);
        assert!(above["formulaGap"].as_f64().unwrap() < 1e-9);
    }

    #[test]
    fn domain_scan_matches_prediction() {
        let scan: serde_json::Value =
            serde_json::from_str(&carteret_domain_scan(0.2, 24).unwrap()).unwrap();
        let predicted = scan["predictedRadius"].as_f64().unwrap();
        for p in scan["points"].as_array().unwrap() {
            let r = p["radius"].as_f64().unwrap();
            if r < predicted - 0.05 {
                assert_eq!(p["verdict"], "inside", "r = {r}");
            }
            if r > predicted + 0.05 {
                assert_eq!(p["verdict"], "outside", "r = {r}");
            }
        }
    }

    #[test]
    fn gallery_surface_round_trips() {
        let names: serde_json::Value = serde_json::from_str(&gallery_names()).unwrap();
        assert!(names.as_array().unwrap().len() >= 10);
        let report: serde_json::Value = serde_json::from_str(
            &gallery_run_json("zero_discord", "{}", 3, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(report["schemaVersion"], 1);
    }
}
