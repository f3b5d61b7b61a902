//! Browser demo: three interactive computations exported through
//! wasm-bindgen. Each returns a JSON string for `www/index.html` to plot.
//! The plain Rust functions below the exports are what the tests exercise.

use bdl_core::asymptotics::{DiluteInputs, Formula, HigherOrderConstants};
use bdl_core::bogoliubov::{self, GridSpec, InteractionMode, SolverSpec};
use bdl_core::fit::log_space;
use bdl_core::liebliniger::{self, QuadSpec};
use bdl_core::scattering::{self, ScatterSpec};
use bdl_core::{Dim, RadialPotential};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Points kept when thinning a solution curve for plotting.
const PLOT_POINTS: usize = 400;

fn to_js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Scattering solution u(r) for a potential given as JSON.
#[wasm_bindgen]
pub fn scattering_profile(potential_json: &str, dim: u8) -> Result<String, JsValue> {
    to_js(scattering_profile_json(potential_json, dim))
}

/// Energy density against density: asymptotic formulas for `dim`, plus the
/// scattering-constant Bogoliubov minimum in three dimensions when asked.
#[wasm_bindgen]
pub fn energy_curve(dim: u8, a: f64, rho_min: f64, rho_max: f64, count: usize, bogoliubov: bool) -> Result<String, JsValue> {
    to_js(energy_curve_json(dim, a, rho_min, rho_max, count, bogoliubov))
}

/// Lieb–Liniger density g(x) on [−1, 1] for the coupling γ.
#[wasm_bindgen]
pub fn lieb_liniger_density(gamma: f64, nodes: usize) -> Result<String, JsValue> {
    to_js(lieb_liniger_json(gamma, nodes))
}

fn thin(x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let step = x.len().div_ceil(PLOT_POINTS).max(1);
    let mut xs: Vec<f64> = x.iter().step_by(step).copied().collect();
    let mut ys: Vec<f64> = y.iter().step_by(step).copied().collect();
    if (x.len() - 1) % step != 0 {
        xs.push(*x.last().unwrap());
        ys.push(*y.last().unwrap());
    }
    (xs, ys)
}

pub fn scattering_profile_json(potential_json: &str, dim: u8) -> Result<String, String> {
    let potential: RadialPotential =
        serde_json::from_str(potential_json).map_err(|e| format!("invalid potential: {e}"))?;
    let dim = Dim::try_from(dim).map_err(|e| e.to_string())?;
    let spec = ScatterSpec {
        steps: 4000,
        richardson: false,
        ..ScatterSpec::default()
    };
    let sol = scattering::solve(&potential, dim, &spec).map_err(|e| e.to_string())?;
    let (r, u) = thin(&sol.grid, &sol.u);
    // the closed form holds outside the range only
    let exterior: Vec<Option<f64>> = r.iter().map(|&r| (r >= sol.range).then(|| sol.exterior(r))).collect();
    Ok(json!({
        "a": sol.a,
        "range": sol.range,
        "dim": dim.as_u8(),
        "r": r,
        "u": u,
        "exterior": exterior,
    })
    .to_string())
}

fn formulas_for(dim: Dim) -> Vec<Formula> {
    Formula::ALL.into_iter().filter(|f| f.dim() == dim).collect()
}

pub fn energy_curve_json(
    dim: u8,
    a: f64,
    rho_min: f64,
    rho_max: f64,
    count: usize,
    bogoliubov: bool,
) -> Result<String, String> {
    let dim = Dim::try_from(dim).map_err(|e| e.to_string())?;
    if !(rho_min > 0.0 && rho_max > rho_min) || !(2..=200).contains(&count) {
        return Err("need 0 < rho_min < rho_max and 2 <= count <= 200".into());
    }
    let rhos = log_space(rho_min, rho_max, count);
    // higher-order constants unknown for a generic potential; zero them
    let consts = HigherOrderConstants::default();
    let mut series = Vec::new();
    for formula in formulas_for(dim) {
        // values outside a formula's domain become gaps in the plot
        let values: Vec<Value> = rhos
            .iter()
            .map(|&rho| {
                DiluteInputs::new(rho, a, dim)
                    .and_then(|i| formula.evaluate(&i, &consts))
                    .map_or(Value::Null, Value::from)
            })
            .collect();
        series.push(json!({ "name": formula.name(), "e": values }));
    }
    if bogoliubov && dim == Dim::Three {
        if !(a > 0.0) {
            return Err("the Bogoliubov curve needs a > 0".into());
        }
        let mode = InteractionMode::ScatteringConstant { a };
        let grid = GridSpec {
            nodes: 200,
            ..GridSpec::default()
        };
        let values: Vec<Value> = rhos
            .iter()
            .map(|&rho| {
                bogoliubov::minimize(rho, &mode, &grid, &SolverSpec::default())
                    .map_or(Value::Null, |m| Value::from(m.energy.total))
            })
            .collect();
        series.push(json!({ "name": "bogoliubov", "e": values }));
    }
    Ok(json!({ "dim": dim.as_u8(), "a": a, "rho": rhos, "series": series }).to_string())
}

pub fn lieb_liniger_json(gamma: f64, nodes: usize) -> Result<String, String> {
    if !(8..=512).contains(&nodes) {
        return Err("nodes must be between 8 and 512".into());
    }
    let spec = QuadSpec {
        nodes,
        ..QuadSpec::default()
    };
    let sol = liebliniger::solve(gamma, &spec).map_err(|e| e.to_string())?;
    Ok(json!({
        "gamma": sol.gamma,
        "lambda": sol.lambda,
        "e_tilde": sol.e_tilde,
        "tonks": liebliniger::tonks_e_tilde(),
        "residual": sol.residual,
        "x": sol.nodes,
        "g": sol.g,
    })
    .to_string())
}
