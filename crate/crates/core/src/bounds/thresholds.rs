//! Minimal gaps, phase-threshold curves and the high-density gap condition.

use serde::Serialize;

use super::{evaluate_bound, BoundMode, Interaction};
use crate::error::{ensure, Result};
use crate::perfect::{check_nu_beta, density_at};
use crate::potentials::PairPotential;
use crate::roots::bisect;

/// First trial gap above the reference gap.
const FIRST_GAP_STEP: f64 = 1e-3;
/// Largest gap tried before giving up.
const GAP_CAP: f64 = 1e9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DeltaMin {
    Found { delta: f64, bound: f64 },
    NotFound { reason: String },
}

impl DeltaMin {
    pub fn delta(&self) -> Option<f64> {
        match self {
            DeltaMin::Found { delta, .. } => Some(*delta),
            DeltaMin::NotFound { .. } => None,
        }
    }
}

/// Smallest gap at which the bound reaches `eta`.
///
/// The gap is doubled from `delta0 + 1e-3` until the bound clears `eta`, then
/// the last sign change is bisected down to adjacent floats; the returned gap
/// is the end of the bracket where the bound is `≥ eta`.
pub fn delta_min(
    interaction: &Interaction,
    beta: f64,
    mu: f64,
    eta: f64,
    mode: BoundMode,
    delta0: f64,
    rho_ref: Option<f64>,
) -> Result<DeltaMin> {
    ensure!(eta >= 0.0 && eta.is_finite(), Domain, "eta must be finite and >= 0, got {eta}");
    ensure!(delta0 >= 0.0 && delta0.is_finite(), Domain, "reference gap must be finite and >= 0, got {delta0}");
    let border = interaction.validity_border(beta, delta0)?;
    if mu <= border {
        return Ok(DeltaMin::NotFound {
            reason: format!(
                "mu = {mu} is outside the condensation domain: the condition mu > g*vhat(0)*rho_c(beta) \
                 requires mu > {border} (g = {}, vhat(0) = {}, beta = {beta}, delta0 = {delta0})",
                interaction.coupling(),
                interaction.vhat0()
            ),
        });
    }
    let excess = |delta: f64| -> Result<f64> {
        let model = interaction.with_gap(delta)?;
        Ok(evaluate_bound(&model, beta, mu, delta0, mode, rho_ref)?.value - eta)
    };
    let mut step = FIRST_GAP_STEP;
    let mut lo = delta0 + step;
    let first = excess(lo)?;
    if first >= 0.0 {
        return Ok(DeltaMin::Found { delta: lo, bound: first + eta });
    }
    loop {
        step *= 2.0;
        let hi = delta0 + step;
        if hi > GAP_CAP {
            return Ok(DeltaMin::NotFound {
                reason: format!("the bound stays below eta = {eta} for all gaps up to {GAP_CAP}"),
            });
        }
        if excess(hi)? >= 0.0 {
            let (_, delta) = bisect(excess, lo, hi, 0.0)?;
            return Ok(DeltaMin::Found { delta, bound: excess(delta)? + eta });
        }
        lo = hi;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "axis", rename_all = "kebab-case")]
pub enum Axis {
    /// Minimal gap as a function of `μ` at fixed inverse temperature.
    MuDelta { beta: f64 },
    /// Threshold chemical potential as a function of `β` at fixed gap.
    MuBeta { delta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurveParams {
    pub interaction: Interaction,
    pub axis: Axis,
    pub eta: f64,
    pub mode: BoundMode,
    pub delta0: f64,
    pub rho_ref: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub abscissa: f64,
    /// `Δ_min` (MuDelta) or the threshold `μ` (MuBeta).
    pub threshold: Option<f64>,
    /// `bound(threshold) - eta`.
    pub bound_residual: Option<f64>,
    /// `μ` on the border of the condensation domain at this point.
    pub validity_border: f64,
    pub resolved: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseCurve {
    pub axis: Axis,
    pub points: Vec<PhasePoint>,
    pub unresolved: Vec<f64>,
}

/// Traces a threshold curve over a monotone grid. Points are independent and
/// may be computed in parallel; the output keeps grid order.
pub fn phase_curve(params: &PhaseCurveParams, grid: &[f64]) -> Result<PhaseCurve> {
    ensure!(!grid.is_empty(), Domain, "phase-curve grid is empty");
    ensure!(grid.iter().all(|x| x.is_finite()), Domain, "phase-curve grid has non-finite entries");
    let ascending = grid.windows(2).all(|w| w[1] > w[0]);
    let descending = grid.windows(2).all(|w| w[1] < w[0]);
    ensure!(ascending || descending, Domain, "phase-curve grid must be strictly monotone");

    let one = |x: f64| phase_point(params, x);
    #[cfg(feature = "parallel")]
    let points: Vec<PhasePoint> = {
        use rayon::prelude::*;
        grid.par_iter().map(|&x| one(x)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let points: Vec<PhasePoint> = grid.iter().map(|&x| one(x)).collect();

    let unresolved = points.iter().filter(|p| !p.resolved).map(|p| p.abscissa).collect();
    Ok(PhaseCurve { axis: params.axis, points, unresolved })
}

fn phase_point(params: &PhaseCurveParams, x: f64) -> PhasePoint {
    let outcome = match params.axis {
        Axis::MuDelta { beta } => mu_delta_point(params, beta, x),
        Axis::MuBeta { delta } => mu_beta_point(params, delta, x),
    };
    match outcome {
        Ok(p) => p,
        Err(e) => PhasePoint {
            abscissa: x,
            threshold: None,
            bound_residual: None,
            validity_border: f64::NAN,
            resolved: false,
            note: Some(e.to_string()),
        },
    }
}

fn mu_delta_point(params: &PhaseCurveParams, beta: f64, mu: f64) -> Result<PhasePoint> {
    let i = &params.interaction;
    let border = i.validity_border(beta, params.delta0)?;
    let found = delta_min(i, beta, mu, params.eta, params.mode, params.delta0, params.rho_ref)?;
    Ok(match found {
        DeltaMin::Found { delta, bound } => PhasePoint {
            abscissa: mu,
            threshold: Some(delta),
            bound_residual: Some(bound - params.eta),
            validity_border: border,
            resolved: true,
            note: None,
        },
        DeltaMin::NotFound { reason } => PhasePoint {
            abscissa: mu,
            threshold: None,
            bound_residual: None,
            validity_border: border,
            resolved: false,
            note: Some(reason),
        },
    })
}

/// Smallest `μ` with `bound ≥ eta` at fixed gap, evaluated whether or not
/// the point lies in the condensation domain (the border is reported
/// alongside so the caller can tell).
fn mu_beta_point(params: &PhaseCurveParams, delta: f64, beta: f64) -> Result<PhasePoint> {
    let i = &params.interaction;
    let border = i.validity_border(beta, params.delta0)?;
    let model = i.with_gap(delta)?;
    let excess = |mu: f64| -> Result<f64> {
        Ok(evaluate_bound(&model, beta, mu, params.delta0, params.mode, params.rho_ref)?.value - params.eta)
    };
    let unresolved = |note: String| PhasePoint {
        abscissa: beta,
        threshold: None,
        bound_residual: None,
        validity_border: border,
        resolved: false,
        note: Some(note),
    };
    let start = if border.is_finite() { border.abs().max(1.0) } else { 1.0 };
    let mut hi = start;
    while excess(hi)? < 0.0 {
        hi *= 2.0;
        if hi > 1e12 * start {
            return Ok(unresolved(format!(
                "the bound stays below eta = {} for mu up to {hi}; the gap {delta} is below the high-density condition",
                params.eta
            )));
        }
    }
    let mut step = start;
    let mut lo = hi - step;
    while excess(lo)? >= 0.0 {
        step *= 2.0;
        lo = hi - step;
        if step > 1e12 * start {
            return Ok(unresolved(format!("the bound exceeds eta = {} for every mu tried", params.eta)));
        }
    }
    let (_, mu) = bisect(excess, lo, hi, 0.0)?;
    Ok(PhasePoint {
        abscissa: beta,
        threshold: Some(mu),
        bound_residual: Some(excess(mu)?),
        validity_border: border,
        resolved: true,
        note: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapCondition {
    /// Fixed point of `Δ = g (v(0)/2 + v̂(0) ρ^P(β, -Δ))`.
    pub delta_star: f64,
    /// Bisection bracket actually used.
    pub bracket: (f64, f64),
    /// The lower end was raised to a small floor because `ρ^P(β, 0⁻)` diverges.
    pub floored: bool,
}

/// Floor for the lower bracket end when `ρ^P(β, 0⁻)` diverges.
const GAP_FLOOR: f64 = 1e-9;

/// Gap above which the LBA bound grows linearly with positive slope in `μ`.
pub fn high_density_gap_condition(nu: u32, beta: f64, coupling: f64, v: &PairPotential) -> Result<GapCondition> {
    check_nu_beta(nu, beta)?;
    ensure!(v.nu() == nu, Domain, "potential lives in dimension {}, not {nu}", v.nu());
    ensure!(coupling >= 0.0 && coupling.is_finite(), Domain, "coupling must be finite and >= 0, got {coupling}");
    if coupling == 0.0 {
        return Ok(GapCondition { delta_star: 0.0, bracket: (0.0, 0.0), floored: false });
    }
    let c = v.characterize()?;
    let rhs = |delta: f64| -> Result<f64> { Ok(coupling * (0.5 * c.v0 + c.vhat0 * density_at(nu, beta, -delta)?)) };
    let mut lo = coupling * 0.5 * c.v0;
    let mut floored = false;
    if nu <= 2 && lo < GAP_FLOOR {
        lo = GAP_FLOOR;
        floored = true;
    }
    let residual = |delta: f64| Ok(delta - rhs(delta)?);
    if residual(lo)? >= 0.0 {
        return Ok(GapCondition { delta_star: lo, bracket: (lo, lo), floored });
    }
    let hi = rhs(lo)?;
    let (_, delta_star) = bisect(residual, lo, hi, 0.0)?;
    Ok(GapCondition { delta_star, bracket: (lo, hi), floored })
}

/// Large-`μ` slope of the LBA bound:
/// `(1/v̂(0)) (1/g - (v(0)/2 + v̂(0) ρ^P(β, -Δ)) / Δ)`.
pub fn high_density_slope(interaction: &Interaction, beta: f64, delta: f64) -> Result<f64> {
    check_nu_beta(interaction.nu(), beta)?;
    ensure!(delta > 0.0, Domain, "gap must be > 0, got {delta}");
    let rho = density_at(interaction.nu(), beta, -delta)?;
    let (v0, vhat0) = (interaction.v0(), interaction.vhat0());
    Ok((1.0 / interaction.coupling() - (0.5 * v0 + vhat0 * rho) / delta) / vhat0)
}
