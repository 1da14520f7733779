//! WebAssembly bindings for the demo page in `www/`. Each exported function
//! returns a JSON document; the `*_json` functions are the same computations
//! callable from native code.

use becgap::bounds::{delta_min, high_density_gap_condition, BoundMode, DeltaMin, Interaction};
use becgap::meanfield::{Branch, MeanFieldModel};
use becgap::potentials::PairPotential;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 2000;

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(format!("need a finite range with max > min, got [{lo}, {hi}]"));
    }
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("number of points must be in 2..={MAX_POINTS}, got {points}"));
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| lo + i as f64 * step).collect())
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct MeanFieldPoint {
    mu: f64,
    pressure: f64,
    total_density: f64,
    condensate_density: f64,
    condensed: bool,
}

#[derive(Serialize)]
struct MeanFieldCurve {
    threshold: f64,
    points: Vec<MeanFieldPoint>,
}

pub fn meanfield_curve_json(
    beta: f64,
    delta: f64,
    lambda: f64,
    mu_min: f64,
    mu_max: f64,
    points: usize,
) -> Result<String, String> {
    let m = MeanFieldModel::new(3, delta, lambda).map_err(|e| e.to_string())?;
    let threshold = m.threshold(beta).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(points);
    for mu in grid(mu_min, mu_max, points)? {
        let t = m.thermo(beta, mu).map_err(|e| e.to_string())?;
        out.push(MeanFieldPoint {
            mu,
            pressure: t.pressure,
            total_density: t.total_density,
            condensate_density: t.condensate_density,
            condensed: t.branch == Branch::AboveThreshold,
        });
    }
    to_json(&MeanFieldCurve { threshold, points: out })
}

#[derive(Serialize)]
struct ThresholdPoint {
    mu: f64,
    delta_min: Option<f64>,
}

#[derive(Serialize)]
struct ThresholdCurve {
    validity_border: f64,
    vhat0: f64,
    points: Vec<ThresholdPoint>,
}

fn gaussian_interaction(amplitude: f64, width: f64, g: f64) -> Result<Interaction, String> {
    let v = PairPotential::gaussian(amplitude, width, 3).map_err(|e| e.to_string())?;
    Interaction::new(v, g).map_err(|e| e.to_string())
}

/// Smallest gap making the explicit bound positive, along a `μ` grid.
pub fn threshold_curve_json(
    beta: f64,
    g: f64,
    amplitude: f64,
    width: f64,
    mu_min: f64,
    mu_max: f64,
    points: usize,
) -> Result<String, String> {
    let interaction = gaussian_interaction(amplitude, width, g)?;
    let border = interaction.validity_border(beta, 0.0).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(points);
    for mu in grid(mu_min, mu_max, points)? {
        let found = delta_min(&interaction, beta, mu, 0.0, BoundMode::Lba, 0.0, None).map_err(|e| e.to_string())?;
        let delta_min = match found {
            DeltaMin::Found { delta, .. } => Some(delta),
            DeltaMin::NotFound { .. } => None,
        };
        out.push(ThresholdPoint { mu, delta_min });
    }
    to_json(&ThresholdCurve { validity_border: border, vhat0: interaction.vhat0(), points: out })
}

#[derive(Serialize)]
struct GapConditionPoint {
    scale: f64,
    delta_star: f64,
}

/// High-density gap condition `Δ*` for Van der Waals rescalings of a
/// Gaussian potential.
pub fn vdw_gap_conditions_json(beta: f64, g: f64, amplitude: f64, width: f64, scales: &[f64]) -> Result<String, String> {
    let base = PairPotential::gaussian(amplitude, width, 3).map_err(|e| e.to_string())?;
    if scales.is_empty() || scales.len() > MAX_POINTS {
        return Err(format!("need 1..={MAX_POINTS} scale factors, got {}", scales.len()));
    }
    let mut out = Vec::with_capacity(scales.len());
    for &scale in scales {
        let v = base.vdw_scale(scale).map_err(|e| e.to_string())?;
        let c = high_density_gap_condition(3, beta, g, &v).map_err(|e| e.to_string())?;
        out.push(GapConditionPoint { scale, delta_star: c.delta_star });
    }
    to_json(&out)
}

#[wasm_bindgen]
pub fn meanfield_curve(
    beta: f64,
    delta: f64,
    lambda: f64,
    mu_min: f64,
    mu_max: f64,
    points: usize,
) -> Result<String, JsError> {
    meanfield_curve_json(beta, delta, lambda, mu_min, mu_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn threshold_curve(
    beta: f64,
    g: f64,
    amplitude: f64,
    width: f64,
    mu_min: f64,
    mu_max: f64,
    points: usize,
) -> Result<String, JsError> {
    threshold_curve_json(beta, g, amplitude, width, mu_min, mu_max, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn vdw_gap_conditions(beta: f64, g: f64, amplitude: f64, width: f64, scales: Vec<f64>) -> Result<String, JsError> {
    vdw_gap_conditions_json(beta, g, amplitude, width, &scales).map_err(|e| JsError::new(&e))
}
