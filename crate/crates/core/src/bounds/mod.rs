//! Lower bounds on the zero-mode condensate density of the interacting gas
//! `H = T^Δ - μN + gU`, expressed through perfect and mean-field reference
//! systems with coupling `λ = g v̂(0)`.
//!
//! Two bounds are available: [`BoundMode::Lb`] needs the total density of the
//! gapless interacting gas as an external reference parameter, while
//! [`BoundMode::Lba`] shifts the chemical potential by `g v(0)/2` and uses
//! explicit quantities only. Both exist as closed forms (gapless reference,
//! `ν > 2`) and as a composition of mean-field quantities that also accepts a
//! gapped reference system `Δ₀ > 0`, which keeps every dimension finite.
//! The superstability slack is taken to zero after the thermodynamic limit.

mod thresholds;

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::meanfield::MeanFieldModel;
use crate::perfect::{check_nu_beta, gapped_critical_density, perfect_critical_density};
use crate::potentials::PairPotential;

pub use thresholds::{
    delta_min, high_density_gap_condition, high_density_slope, phase_curve, Axis, DeltaMin, GapCondition,
    PhaseCurve, PhaseCurveParams, PhasePoint,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundMode {
    #[serde(rename = "LB")]
    Lb,
    #[serde(rename = "LBA")]
    Lba,
}

impl std::fmt::Display for BoundMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundMode::Lb => "LB",
            BoundMode::Lba => "LBA",
        })
    }
}

impl std::str::FromStr for BoundMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lb" => Ok(BoundMode::Lb),
            "lba" => Ok(BoundMode::Lba),
            _ => Err(Error::Parse(format!("unknown bound mode `{s}` (expected lb or lba)"))),
        }
    }
}

/// Coupling and pair potential, without a gap.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    potential: PairPotential,
    coupling: f64,
    v0: f64,
    vhat0: f64,
}

impl Interaction {
    pub fn new(potential: PairPotential, coupling: f64) -> Result<Self> {
        ensure!(coupling > 0.0 && coupling.is_finite(), Domain, "coupling must be finite and > 0, got {coupling}");
        let c = potential.characterize()?;
        ensure!(c.vhat0 > 0.0, Domain, "the potential must have a positive integral, got {}", c.vhat0);
        Ok(Self { potential, coupling, v0: c.v0, vhat0: c.vhat0 })
    }

    pub fn potential(&self) -> &PairPotential {
        &self.potential
    }

    pub fn nu(&self) -> u32 {
        self.potential.nu()
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn v0(&self) -> f64 {
        self.v0
    }

    pub fn vhat0(&self) -> f64 {
        self.vhat0
    }

    /// Mean-field coupling `λ = g v̂(0)` of the reference systems.
    pub fn mean_field_coupling(&self) -> f64 {
        self.coupling * self.vhat0
    }

    /// Border of the condensation domain, `g v̂(0) ρ^P(β, -Δ₀)`; for `Δ₀ = 0`
    /// this is `g v̂(0) ρ_c(β)`, infinite when `ν ≤ 2`.
    pub fn validity_border(&self, beta: f64, delta0: f64) -> Result<f64> {
        check_nu_beta(self.nu(), beta)?;
        match gapped_critical_density(self.nu(), beta, delta0) {
            Ok(rho) => Ok(self.mean_field_coupling() * rho),
            Err(Error::Divergence(_)) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        }
    }

    pub fn with_gap(&self, delta: f64) -> Result<InteractingModel> {
        InteractingModel::new(self.clone(), delta)
    }

    /// Mean-field stand-in for the reference density: total density of the
    /// gapless mean-field gas with coupling `g v̂(0)` at `μ`.
    pub fn surrogate_reference_density(&self, beta: f64, mu: f64) -> Result<f64> {
        let mf = MeanFieldModel::new(self.nu(), 0.0, self.mean_field_coupling())?;
        Ok(mf.thermo(beta, mu)?.total_density)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InteractingModel {
    pub interaction: Interaction,
    pub delta: f64,
}

impl InteractingModel {
    pub fn new(interaction: Interaction, delta: f64) -> Result<Self> {
        ensure!(delta > 0.0 && delta.is_finite(), Domain, "gap must be finite and > 0, got {delta}");
        Ok(Self { interaction, delta })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundTerm {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub value: f64,
    /// `μ` exceeds the condensation border (the border itself is invalid).
    pub valid: bool,
    pub mode: BoundMode,
    pub delta0: f64,
    pub validity_border: f64,
    pub terms: Vec<BoundTerm>,
    pub rho_ref: Option<f64>,
}

fn term(name: &'static str, value: f64) -> BoundTerm {
    BoundTerm { name, value }
}

fn report(mode: BoundMode, delta0: f64, mu: f64, border: f64, terms: Vec<BoundTerm>, rho_ref: Option<f64>) -> BoundReport {
    BoundReport {
        value: terms.iter().map(|t| t.value).sum(),
        valid: mu > border,
        mode,
        delta0,
        validity_border: border,
        terms,
        rho_ref,
    }
}

/// Gapless critical density and gapped critical density for the closed forms.
fn critical_pair(model: &InteractingModel, beta: f64) -> Result<(f64, f64)> {
    let nu = model.interaction.nu();
    check_nu_beta(nu, beta)?;
    let rho_c = perfect_critical_density(nu, beta).map_err(|e| match e {
        Error::Divergence(m) => Error::Divergence(format!(
            "{m}; use the composed bound with a gapped reference (delta0 > 0)"
        )),
        e => e,
    })?;
    Ok((rho_c, gapped_critical_density(nu, beta, model.delta)?))
}

/// Closed-form bound with the reference density `rho_ref` of the gapless
/// interacting gas.
pub fn bound_lb(model: &InteractingModel, beta: f64, mu: f64, rho_ref: f64) -> Result<BoundReport> {
    ensure!(rho_ref >= 0.0 && rho_ref.is_finite(), Domain, "reference density must be finite and >= 0, got {rho_ref}");
    ensure!(mu.is_finite(), Domain, "chemical potential must be finite, got {mu}");
    let (rho_c, rho_gap) = critical_pair(model, beta)?;
    let i = &model.interaction;
    let (g, v0, vhat0, delta) = (i.coupling, i.v0, i.vhat0, model.delta);
    let terms = vec![
        term("mu_over_coupling", mu / (g * vhat0)),
        term("gap_quadratic", g * vhat0 * rho_gap * rho_gap / (2.0 * delta)),
        term("reference", -g * v0 * rho_ref / (2.0 * delta)),
        term("gap_linear", -(mu + delta) * rho_gap / delta),
        term("critical", -rho_c),
    ];
    Ok(report(BoundMode::Lb, 0.0, mu, g * vhat0 * rho_c, terms, Some(rho_ref)))
}

/// Closed-form bound built from explicit quantities only.
pub fn bound_lba(model: &InteractingModel, beta: f64, mu: f64) -> Result<BoundReport> {
    ensure!(mu.is_finite(), Domain, "chemical potential must be finite, got {mu}");
    let (rho_c, rho_gap) = critical_pair(model, beta)?;
    let i = &model.interaction;
    let (g, v0, vhat0, delta) = (i.coupling, i.v0, i.vhat0, model.delta);
    let terms = vec![
        term("shifted_mu_over_coupling", (2.0 * mu + g * v0) / (2.0 * g * vhat0)),
        term("gap_quadratic", g * vhat0 * rho_gap * rho_gap / (2.0 * delta)),
        term("critical", -rho_c),
        term(
            "gap_linear",
            -(2.0 * mu + 2.0 * delta + g * v0) / (2.0 * delta * vhat0) * (0.5 * v0 + vhat0 * rho_gap),
        ),
    ];
    Ok(report(BoundMode::Lba, 0.0, mu, g * vhat0 * rho_c, terms, None))
}

/// Bound composed from mean-field reference systems with gaps `Δ₀` (leading
/// condensate) and `Δ` (the `1/(Δ - Δ₀)` corrections).
pub fn bound_general(
    model: &InteractingModel,
    beta: f64,
    mu: f64,
    delta0: f64,
    mode: BoundMode,
    rho_ref: Option<f64>,
) -> Result<BoundReport> {
    let i = &model.interaction;
    let nu = i.nu();
    check_nu_beta(nu, beta)?;
    ensure!(mu.is_finite(), Domain, "chemical potential must be finite, got {mu}");
    ensure!(
        delta0 >= 0.0 && delta0 < model.delta,
        Domain,
        "reference gap must lie in [0, {}), got {delta0}",
        model.delta
    );
    ensure!(
        nu > 2 || delta0 > 0.0,
        Domain,
        "dimension {nu} needs a gapped reference system (delta0 > 0)"
    );
    let (g, v0, vhat0) = (i.coupling, i.v0, i.vhat0);
    let quadratic = vhat0;
    let linear = 0.5 * v0;
    let lambda = i.mean_field_coupling();
    let shifted = match mode {
        BoundMode::Lb => mu,
        BoundMode::Lba => mu + g * linear,
    };
    let reference = MeanFieldModel::new(nu, delta0, lambda)?.thermo(beta, shifted)?;
    let gapped = MeanFieldModel::new(nu, model.delta, lambda)?.thermo(beta, shifted)?;
    let linear_piece = match mode {
        BoundMode::Lb => {
            let r = rho_ref.ok_or_else(|| {
                Error::MissingParameter("the LB bound needs the reference density rho_ref".into())
            })?;
            ensure!(r >= 0.0 && r.is_finite(), Domain, "reference density must be finite and >= 0, got {r}");
            linear * r
        }
        BoundMode::Lba => linear * gapped.total_density,
    };
    let factor = g / (model.delta - delta0);
    let terms = vec![
        term("reference_condensate", reference.condensate_density),
        term(
            "gap_condensate_quadratic",
            factor * 0.5 * vhat0 * gapped.condensate_density * gapped.condensate_density,
        ),
        term(
            "gap_density_quadratic",
            -factor * (vhat0 - 0.5 * quadratic) * gapped.total_density * gapped.total_density,
        ),
        term("superstability_linear", -factor * linear_piece),
    ];
    let border = i.validity_border(beta, delta0)?;
    let rho_ref = if mode == BoundMode::Lb { rho_ref } else { None };
    Ok(report(mode, delta0, mu, border, terms, rho_ref))
}

/// Closed form when `Δ₀ = 0`, composition otherwise.
pub fn evaluate_bound(
    model: &InteractingModel,
    beta: f64,
    mu: f64,
    delta0: f64,
    mode: BoundMode,
    rho_ref: Option<f64>,
) -> Result<BoundReport> {
    if delta0 > 0.0 {
        return bound_general(model, beta, mu, delta0, mode, rho_ref);
    }
    match mode {
        BoundMode::Lba => bound_lba(model, beta, mu),
        BoundMode::Lb => {
            let r = rho_ref.ok_or_else(|| {
                Error::MissingParameter("the LB bound needs the reference density rho_ref".into())
            })?;
            bound_lb(model, beta, mu, r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interaction() -> Interaction {
        Interaction::new(PairPotential::gaussian(1.0, 1.0, 3).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn lb_recomposes_from_perfect_gas() {
        let m = interaction().with_gap(2.0).unwrap();
        let beta = 1.0;
        let mu = 3.0;
        let r = bound_lb(&m, beta, mu, 0.0).unwrap();
        let vhat0 = m.interaction.vhat0();
        let rc = perfect_critical_density(3, beta).unwrap();
        let rp = gapped_critical_density(3, beta, 2.0).unwrap();
        let by_hand = mu / vhat0 + vhat0 * rp * rp / 4.0 - (mu + 2.0) * rp / 2.0 - rc;
        assert!((r.value - by_hand).abs() < 1e-12);
        assert!(r.valid);
        assert_eq!(r.terms.len(), 5);
    }

    #[test]
    fn large_gap_limit() {
        let i = interaction();
        let beta = 0.5;
        let mu = 20.0;
        let limit = mu / i.vhat0() - perfect_critical_density(3, beta).unwrap();
        let m = i.with_gap(1e6).unwrap();
        assert!((bound_lb(&m, beta, mu, 0.7).unwrap().value - limit).abs() < 1e-6);
        assert!((bound_lba(&m, beta, mu).unwrap().value - limit).abs() < 1e-4);
    }

    #[test]
    fn border_is_invalid() {
        let i = interaction();
        let m = i.with_gap(1.0).unwrap();
        let border = i.validity_border(1.0, 0.0).unwrap();
        let r = bound_lb(&m, 1.0, border, 0.0).unwrap();
        assert!(!r.valid);
        assert!((r.terms[0].value + r.terms[4].value).abs() < 1e-15);
        assert!(bound_lba(&m, 1.0, border * (1.0 + 1e-12)).unwrap().valid);
    }

    #[test]
    fn general_reduces_to_closed_forms() {
        let i = interaction();
        for (delta, beta, mu) in [(0.5, 1.0, 2.0), (3.0, 0.2, 20.0), (10.0, 2.0, 1.0)] {
            let m = i.with_gap(delta).unwrap();
            let a = bound_lba(&m, beta, mu).unwrap();
            let b = bound_general(&m, beta, mu, 0.0, BoundMode::Lba, None).unwrap();
            assert!(a.valid);
            assert!((a.value - b.value).abs() < 1e-10 * (1.0 + a.value.abs()), "{} vs {}", a.value, b.value);
            let a = bound_lb(&m, beta, mu, 0.3).unwrap();
            let b = bound_general(&m, beta, mu, 0.0, BoundMode::Lb, Some(0.3)).unwrap();
            assert!((a.value - b.value).abs() < 1e-10 * (1.0 + a.value.abs()));
        }
    }

    #[test]
    fn general_errors_and_low_dimensions() {
        let i = interaction();
        let m = i.with_gap(1.0).unwrap();
        assert!(matches!(bound_general(&m, 1.0, 2.0, 1.0, BoundMode::Lba, None), Err(Error::Domain(_))));
        assert!(matches!(bound_general(&m, 1.0, 2.0, 0.0, BoundMode::Lb, None), Err(Error::MissingParameter(_))));
        let low = Interaction::new(PairPotential::gaussian(1.0, 1.0, 2).unwrap(), 1.0).unwrap();
        let m2 = low.with_gap(2.0).unwrap();
        let r = bound_general(&m2, 1.0, 50.0, 0.1, BoundMode::Lba, None).unwrap();
        assert!(r.value.is_finite() && r.valid);
        assert!(matches!(bound_general(&m2, 1.0, 50.0, 0.0, BoundMode::Lba, None), Err(Error::Domain(_))));
        assert!(matches!(bound_lba(&m2, 1.0, 50.0), Err(Error::Divergence(_))));
    }

    #[test]
    fn weak_coupling_blows_up() {
        let p = PairPotential::gaussian(1.0, 1.0, 3).unwrap();
        let mut prev = 0.0;
        for g in [1e-1, 1e-3, 1e-5] {
            let m = Interaction::new(p.clone(), g).unwrap().with_gap(1.0).unwrap();
            let v = bound_lba(&m, 1.0, 1.0).unwrap().value;
            assert!(v > prev);
            prev = v;
        }
        assert!(prev > 1e3);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("LBA".parse::<BoundMode>().unwrap(), BoundMode::Lba);
        assert_eq!("lb".parse::<BoundMode>().unwrap(), BoundMode::Lb);
        assert!("x".parse::<BoundMode>().is_err());
    }
}
