//! Browser bindings for three interactive views: the spectrum and metrics
//! of one noisy circuit, a small seed-averaged scaling sweep with its fit,
//! and the fit model with its small-`xi` leading term.
//!
//! Every exported function returns a JSON string; the plain functions
//! behind them are ordinary Rust and are tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use scramble_core::ansatz::{build_circuit, AnsatzSpec, Family, ParameterMode};
use scramble_core::circuit::{run_circuit, run_ideal};
use scramble_core::fit::{fit_scaling, noise_prefactor, scaling_model, MetricKind, ScalingSample};
use scramble_core::metrics::spectral_report;
use scramble_core::noise::NoiseSpec;
use scramble_core::state::{DensityMatrix, StateVector};

/// Largest register the page offers; keeps every call well under a second.
pub const MAX_DEMO_QUBITS: usize = 5;
pub const MAX_DEMO_LAYERS: usize = 64;
pub const MAX_DEMO_SEEDS: u64 = 20;
const CURVE_POINTS: usize = 80;

#[derive(Clone, Debug, Serialize)]
pub struct CircuitAnalysis {
    pub nu: usize,
    pub xi: f64,
    pub fidelity: f64,
    pub fidelity_law: f64,
    pub lambda1: f64,
    pub w: Option<f64>,
    pub c_rel: Option<f64>,
    pub c_abs: f64,
    pub trace_dist_wn: f64,
    /// Descending spectrum of the noisy state.
    pub eigenvalues: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvePoint {
    pub nu: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricSeries {
    pub metric: String,
    pub points: Vec<CurvePoint>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub curve: Vec<CurvePoint>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingView {
    pub series: Vec<MetricSeries>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelView {
    pub model: Vec<CurvePoint>,
    pub leading: Vec<CurvePoint>,
    /// `xi / (e^xi - 1)` at each sampled `nu`.
    pub prefactor: Vec<CurvePoint>,
}

fn parse_family(name: &str) -> Result<Family, String> {
    let family: Family = name.parse().map_err(|e: scramble_core::Error| e.to_string())?;
    if family == Family::HvaSparse {
        return Err("the sparse family needs a Hamiltonian file and is not offered here".into());
    }
    Ok(family)
}

fn check_size(n_qubits: usize, layers: usize) -> Result<(), String> {
    if !(2..=MAX_DEMO_QUBITS).contains(&n_qubits) {
        return Err(format!("qubits must lie in 2..={MAX_DEMO_QUBITS}"));
    }
    if !(1..=MAX_DEMO_LAYERS).contains(&layers) {
        return Err(format!("layers must lie in 1..={MAX_DEMO_LAYERS}"));
    }
    Ok(())
}

fn log_grid(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(move |i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
}

pub fn analyse(family: &str, n_qubits: usize, layers: usize, epsilon: f64, seed: u64, vqe: bool) -> Result<CircuitAnalysis, String> {
    let family = parse_family(family)?;
    check_size(n_qubits, layers)?;
    let mode = if vqe { ParameterMode::Vqe } else { ParameterMode::Random };
    let spec = AnsatzSpec::new(family, n_qubits, layers).with_seed(seed).with_mode(mode);
    let noise = NoiseSpec::new(epsilon).map_err(|e| e.to_string())?;
    let run = || -> scramble_core::Result<CircuitAnalysis> {
        let program = build_circuit(&spec, None, seed, noise)?;
        let rho = run_circuit(&program, &DensityMatrix::zero_state(n_qubits)?)?;
        let psi = run_ideal(&program, &StateVector::zero(n_qubits)?)?;
        let nu = program.gate_count();
        let r = spectral_report(&rho, &psi, Some(noise.no_error_probability(nu)))?;
        let xi = epsilon * nu as f64;
        Ok(CircuitAnalysis {
            nu,
            xi,
            fidelity: r.fidelity,
            fidelity_law: (-xi).exp(),
            lambda1: r.lambda1,
            w: r.uniformity,
            c_rel: r.commutator_norm_rel,
            c_abs: r.commutator_norm_abs,
            trace_dist_wn: r.trace_dist_wn,
            eigenvalues: r.eigenvalues,
        })
    };
    run().map_err(|e| e.to_string())
}

/// Seed-averaged `W` and `C_rel` on a doubling layer grid `1, 2, 4, ...,
/// max_layers`, with a power-law fit per metric when it is defined.
pub fn scaling(family: &str, n_qubits: usize, max_layers: usize, epsilon: f64, seeds: u64) -> Result<ScalingView, String> {
    check_size(n_qubits, max_layers)?;
    if !(1..=MAX_DEMO_SEEDS).contains(&seeds) {
        return Err(format!("seeds must lie in 1..={MAX_DEMO_SEEDS}"));
    }
    let layer_grid: Vec<usize> = std::iter::successors(Some(1usize), |l| Some(l * 2))
        .take_while(|l| *l <= max_layers)
        .collect();
    let mut w_points = Vec::new();
    let mut c_points = Vec::new();
    for &layers in &layer_grid {
        let mut nu = 0;
        let (mut w_sum, mut c_sum, mut count) = (0.0, 0.0, 0);
        for seed in 0..seeds {
            let a = analyse(family, n_qubits, layers, epsilon, seed, false)?;
            nu = a.nu;
            if let (Some(w), Some(c)) = (a.w, a.c_rel) {
                w_sum += w;
                c_sum += c;
                count += 1;
            }
        }
        if count > 0 {
            w_points.push(CurvePoint { nu: nu as f64, value: w_sum / count as f64 });
            c_points.push(CurvePoint { nu: nu as f64, value: c_sum / count as f64 });
        }
    }
    let series = [(MetricKind::W, w_points), (MetricKind::C, c_points)]
        .into_iter()
        .map(|(metric, points)| {
            let samples: Vec<ScalingSample> = points
                .iter()
                .map(|p| ScalingSample::new(p.nu, epsilon, p.value, metric))
                .collect();
            let fit = fit_scaling(&samples).ok();
            let curve = match (&fit, points.first(), points.last()) {
                (Some(f), Some(lo), Some(hi)) => log_grid(lo.nu, hi.nu, CURVE_POINTS)
                    .map(|nu| CurvePoint { nu, value: f.predict(nu, epsilon * nu) })
                    .collect(),
                _ => Vec::new(),
            };
            MetricSeries {
                metric: metric.to_string(),
                points,
                alpha: fit.map(|f| f.alpha),
                beta: fit.map(|f| f.beta),
                curve,
            }
        })
        .collect();
    Ok(ScalingView { series })
}

pub fn model(alpha: f64, beta: f64, epsilon: f64, nu_max: f64) -> Result<ModelView, String> {
    if !(alpha > 0.0 && beta.is_finite() && (0.0..=1.0).contains(&epsilon) && nu_max > 1.0 && nu_max.is_finite()) {
        return Err("need alpha > 0, finite beta, epsilon in [0, 1] and nu_max > 1".into());
    }
    let grid: Vec<f64> = log_grid(1.0, nu_max, CURVE_POINTS).collect();
    let at = |f: &dyn Fn(f64) -> f64| grid.iter().map(|&nu| CurvePoint { nu, value: f(nu) }).collect();
    Ok(ModelView {
        model: at(&|nu| scaling_model(alpha, beta, nu, epsilon * nu)),
        leading: at(&|nu| alpha / nu.powf(beta)),
        prefactor: at(&|nu| noise_prefactor(epsilon * nu)),
    })
}

fn to_js<T: Serialize>(result: Result<T, String>) -> Result<String, JsValue> {
    result
        .and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

/// Metrics and spectrum of one noisy circuit, as JSON.
#[wasm_bindgen(js_name = analyseCircuit)]
pub fn analyse_circuit(family: &str, n_qubits: usize, layers: usize, epsilon: f64, seed: u32, vqe: bool) -> Result<String, JsValue> {
    to_js(analyse(family, n_qubits, layers, epsilon, seed as u64, vqe))
}

/// Seed-averaged scaling sweep with fits, as JSON.
#[wasm_bindgen(js_name = scalingCurve)]
pub fn scaling_curve(family: &str, n_qubits: usize, max_layers: usize, epsilon: f64, seeds: u32) -> Result<String, JsValue> {
    to_js(scaling(family, n_qubits, max_layers, epsilon, seeds as u64))
}

/// Model curve, leading small-`xi` term and prefactor, as JSON.
#[wasm_bindgen(js_name = fitModel)]
pub fn fit_model(alpha: f64, beta: f64, epsilon: f64, nu_max: f64) -> Result<String, JsValue> {
    to_js(model(alpha, beta, epsilon, nu_max))
}
