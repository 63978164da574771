//! Browser bindings. Each export takes plain numbers and returns a JSON
//! string: `{"ok": true, ...}` on success, `{"ok": false, "error": "..."}`
//! otherwise, so the page never has to catch exceptions.

use gauss_marginals::{
    diagonalize_balanced, dominates, solve_couplings, synthesize, verify, SpectralVector,
    StepParameter, TwoModeStandardForm,
};
use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn respond(result: Result<Value, String>) -> String {
    match result {
        Ok(mut v) => {
            v["ok"] = json!(true);
            v.to_string()
        }
        Err(e) => json!({ "ok": false, "error": e }).to_string(),
    }
}

fn spectral(values: Vec<f64>, what: &str) -> Result<SpectralVector, String> {
    SpectralVector::new(values).map_err(|e| format!("{what}: {e}"))
}

/// Dominance certificate for global parameters `kappa` and local `m`.
#[wasm_bindgen]
pub fn check_dominance(kappa: Vec<f64>, m: Vec<f64>) -> String {
    respond((|| {
        let cert = dominates(&spectral(kappa, "global")?, &spectral(m, "local")?)
            .map_err(|e| e.to_string())?;
        Ok(json!({
            "kappa_sorted": cert.kappa_sorted.values(),
            "m_sorted": cert.m_sorted.values(),
            "partial_sum_slacks": cert.partial_sum_slacks,
            "tail_slack": cert.tail_slack,
            "compatible": cert.compatible,
            "physical": cert.kappa_sorted.values()[0] >= 1.0,
        }))
    })())
}

#[derive(Serialize)]
struct Region {
    kappa_max: f64,
    steps: usize,
    /// Row-major over `(kappa1, kappa2)`, `kappa1` along rows.
    feasible: Vec<bool>,
}

/// Feasible `(kappa1, kappa2)` for fixed `(m1, m2)` on a `steps x steps`
/// grid of `[1, kappa_max]^2`.
fn region(m1: f64, m2: f64, kappa_max: f64, steps: usize) -> Region {
    let at = |i: usize| 1.0 + (kappa_max - 1.0) * i as f64 / (steps.max(2) - 1) as f64;
    let mut feasible = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for j in 0..steps {
            feasible.push(solve_couplings(m1, m2, at(i), at(j)).is_ok());
        }
    }
    Region {
        kappa_max,
        steps,
        feasible,
    }
}

/// Standard form with local `(m1, m2)` and global `(k1, k2)`, plus the
/// feasible region for the given local parameters.
#[wasm_bindgen]
pub fn reconstruct_two_mode(m1: f64, m2: f64, k1: f64, k2: f64, grid: usize) -> String {
    respond((|| {
        if !(m1 >= 1.0 && m2 >= 1.0) {
            return Err("local parameters must be at least 1".into());
        }
        let kappa_max = m1.max(m2) + 1.0;
        let region = region(m1, m2, kappa_max, grid.clamp(2, 200));
        let couplings = solve_couplings(m1, m2, k1, k2);
        let mut out = json!({ "region": region, "feasible": couplings.is_ok() });
        match couplings {
            Ok((kx, kp)) => {
                let form = TwoModeStandardForm { m1, m2, kx, kp };
                out["form"] = json!(form);
                out["matrix"] = json!(form.matrix4().as_slice());
                if let Ok(d) = diagonalize_balanced(&form) {
                    out["single_generator"] = json!({ "kind": d.kind, "parameter": d.parameter });
                }
            }
            Err(e) => out["reason"] = json!(e.to_string()),
        }
        Ok(out)
    })())
}

/// Synthesis trace: the diagonal chain and the generator used at each step.
#[wasm_bindgen]
pub fn synthesize_chain(kappa: Vec<f64>, m: Vec<f64>) -> String {
    respond((|| {
        let out = synthesize(&spectral(kappa, "global")?, &spectral(m, "local")?, 1e-9)
            .map_err(|e| e.to_string())?;
        let report =
            verify(&out.symplectic, &out.kappa, &out.m, 1e-8).map_err(|e| e.to_string())?;
        let steps: Vec<Value> = out
            .trace
            .steps
            .iter()
            .map(|s| {
                let param = match s.parameter {
                    StepParameter::Theta(x) | StepParameter::Mu(x) => json!(x),
                    StepParameter::Targets(t) => json!(t),
                };
                json!({
                    "stage": s.stage,
                    "kind": s.kind,
                    "pair": [s.pair.0 + 1, s.pair.1 + 1],
                    "param": param,
                    "epsilon": s.epsilon,
                })
            })
            .collect();
        Ok(json!({
            "chain": out.trace.chain(),
            "steps": steps,
            "stage_counts": out.trace.stage_counts,
            "verify": report,
        }))
    })())
}
