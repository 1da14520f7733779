//! Mean-field Bose gas with a zero-mode gap: `H = T^Δ + λ N² / 2V`.
//!
//! The threshold `μ* = -Δ + λ ρ^P(β, -Δ)` splits the chemical-potential axis.
//! Above it the zero mode carries a macroscopic density and everything is
//! explicit; below it the total density solves the self-consistency
//! condition `ρ = ρ^P(β, μ - λρ)`.

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::perfect::{check_nu_beta, gapped_critical_density, perfect_free_energy_gap, pressure_at};
use crate::roots::{bisect, golden_maximize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldModel {
    pub nu: u32,
    pub delta: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    BelowThreshold,
    AboveThreshold,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanFieldThermo {
    pub pressure: f64,
    pub total_density: f64,
    pub condensate_density: f64,
    /// `lim ⟨N²⟩ / V²`
    pub n2_over_v2: f64,
    pub branch: Branch,
}

impl MeanFieldModel {
    pub fn new(nu: u32, delta: f64, lambda: f64) -> Result<Self> {
        ensure!(nu >= 1, Domain, "dimension must be >= 1, got {nu}");
        ensure!(delta >= 0.0 && delta.is_finite(), Domain, "gap must be finite and >= 0, got {delta}");
        ensure!(lambda > 0.0 && lambda.is_finite(), Domain, "coupling must be finite and > 0, got {lambda}");
        Ok(Self { nu, delta, lambda })
    }

    /// `ρ^P(β, -Δ)`; diverges for `Δ = 0`, `ν ≤ 2`.
    fn critical_density(&self, beta: f64) -> Result<f64> {
        gapped_critical_density(self.nu, beta, self.delta)
    }

    /// `μ*(β) = -Δ + λ ρ^P(β, -Δ)`.
    pub fn threshold(&self, beta: f64) -> Result<f64> {
        Ok(-self.delta + self.lambda * self.critical_density(beta)?)
    }

    /// Solves `ρ = ρ^P(β, μ - λρ)` for `μ ≤ μ*`.
    pub fn selfconsistent_density(&self, beta: f64, mu: f64) -> Result<f64> {
        check_nu_beta(self.nu, beta)?;
        let critical = self.critical_density(beta)?;
        let threshold = -self.delta + self.lambda * critical;
        ensure!(
            mu <= threshold,
            Branch,
            "mu = {mu} lies above the threshold {threshold}; the density is explicit there"
        );
        if mu == threshold {
            return Ok(critical);
        }
        // ρ - ρ^P(β, μ - λρ) increases strictly in ρ; the effective chemical
        // potential must stay at or below -Δ, hence the lower end
        let lo = ((mu + self.delta) / self.lambda).max(0.0);
        let hi = critical.max((mu + self.delta) / self.lambda) + 1.0;
        let residual = |rho: f64| -> Result<f64> {
            let eff = (mu - self.lambda * rho).min(-self.delta);
            Ok(rho - crate::perfect::density_at(self.nu, beta, eff)?)
        };
        if residual(lo)? >= 0.0 {
            return Ok(lo);
        }
        let (_, rho) = bisect(residual, lo, hi, 0.0)?;
        Ok(rho)
    }

    pub fn thermo(&self, beta: f64, mu: f64) -> Result<MeanFieldThermo> {
        check_nu_beta(self.nu, beta)?;
        ensure!(mu.is_finite(), Domain, "chemical potential must be finite, got {mu}");
        let critical = match self.critical_density(beta) {
            Ok(c) => c,
            Err(Error::Divergence(m)) => {
                return Err(Error::Divergence(format!(
                    "{m}; mean-field condensation needs a gap in dimension {}",
                    self.nu
                )))
            }
            Err(e) => return Err(e),
        };
        let shifted = mu + self.delta;
        if mu >= -self.delta + self.lambda * critical {
            let rho = shifted / self.lambda;
            return Ok(MeanFieldThermo {
                pressure: shifted * shifted / (2.0 * self.lambda) + pressure_at(self.nu, beta, -self.delta)?,
                total_density: rho,
                condensate_density: (rho - critical).max(0.0),
                n2_over_v2: rho * rho,
                branch: Branch::AboveThreshold,
            });
        }
        let rho = self.selfconsistent_density(beta, mu)?;
        // μρ - f^{P,Δ}(ρ) - λρ²/2 with f^{P,Δ}(ρ) = ρ(μ - λρ) - p^P(μ - λρ)
        let eff = (mu - self.lambda * rho).min(-self.delta);
        let pressure = 0.5 * self.lambda * rho * rho + pressure_at(self.nu, beta, eff)?;
        Ok(MeanFieldThermo {
            pressure,
            total_density: rho,
            condensate_density: 0.0,
            n2_over_v2: rho * rho,
            branch: Branch::BelowThreshold,
        })
    }

    /// `f_λ(β, ρ) = f^{P,Δ}(β, ρ) + λρ²/2`.
    pub fn free_energy(&self, beta: f64, rho: f64) -> Result<f64> {
        Ok(perfect_free_energy_gap(self.nu, beta, rho, self.delta)? + 0.5 * self.lambda * rho * rho)
    }

    /// `sup_{0 ≤ ρ ≤ rho_max} (μρ - f_λ(β, ρ))` by golden-section search.
    ///
    /// Returns `(pressure, maximizer)`; a maximizer on the upper end of the
    /// bracket is reported as a bracket error.
    pub fn legendre_pressure(&self, beta: f64, mu: f64, rho_max: f64) -> Result<(f64, f64)> {
        check_nu_beta(self.nu, beta)?;
        ensure!(rho_max > 0.0 && rho_max.is_finite(), Domain, "rho_max must be > 0, got {rho_max}");
        let objective = |rho: f64| Ok(mu * rho - self.free_energy(beta, rho)?);
        let (argmax, max) = golden_maximize(objective, 0.0, rho_max, 1e-12 * rho_max)?;
        ensure!(
            argmax < rho_max * (1.0 - 1e-9),
            Bracket,
            "maximizer sits at rho_max = {rho_max}; enlarge the bracket"
        );
        Ok((max, argmax))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perfect::{perfect_critical_density, perfect_density, ThermoState};

    fn model() -> MeanFieldModel {
        MeanFieldModel::new(3, 1.0, 1.0).unwrap()
    }

    #[test]
    fn threshold_value() {
        let rho = perfect_density(&ThermoState::new(3, 1.0, -1.0).unwrap()).unwrap();
        assert!((model().threshold(1.0).unwrap() - (-1.0 + rho)).abs() < 1e-15);
        // Li_{3/2}(e^{-1}) / (4π)^{3/2} = 0.00961780481599715 (arbitrary-precision reference)
        assert!((model().threshold(1.0).unwrap() + 1.0 - 0.009_617_804_815_997_15).abs() < 1e-14);
        let far = MeanFieldModel::new(3, 50.0, 1.0).unwrap();
        assert!((far.threshold(1.0).unwrap() + 50.0).abs() < 1e-20_f64.max(1e-15 * 50.0));
    }

    #[test]
    fn above_threshold_record() {
        let t = model().thermo(1.0, 0.5).unwrap();
        let crit = perfect_density(&ThermoState::new(3, 1.0, -1.0).unwrap()).unwrap();
        let pp = crate::perfect::perfect_pressure(&ThermoState::new(3, 1.0, -1.0).unwrap()).unwrap();
        assert_eq!(t.branch, Branch::AboveThreshold);
        assert!((t.total_density - 1.5).abs() < 1e-15);
        assert!((t.condensate_density - (1.5 - crit)).abs() < 1e-15);
        assert!((t.pressure - (1.125 + pp)).abs() < 1e-15);
        assert!((t.n2_over_v2 - 2.25).abs() < 1e-15);
        let b = model().thermo(1.0, -2.0).unwrap();
        assert_eq!(b.branch, Branch::BelowThreshold);
        assert_eq!(b.condensate_density, 0.0);
    }

    #[test]
    fn selfconsistency_residual() {
        let m = MeanFieldModel::new(3, 0.0, 1.0).unwrap();
        let rho = m.selfconsistent_density(1.0, -1.0).unwrap();
        let rhs = perfect_density(&ThermoState::new(3, 1.0, -1.0 - rho).unwrap()).unwrap();
        assert!((rho - rhs).abs() < 1e-10);
        assert!(model().selfconsistent_density(1.0, -400.0).unwrap() < 1e-150);
        assert!(matches!(model().selfconsistent_density(1.0, 0.0), Err(Error::Branch(_))));
    }

    #[test]
    fn continuity_at_the_kink() {
        for (nu, delta, lambda, beta) in [(3, 1.0, 1.0, 1.0), (3, 0.0, 2.0, 0.3), (1, 0.5, 1.0, 2.0), (2, 2.0, 0.5, 0.1)] {
            let m = MeanFieldModel::new(nu, delta, lambda).unwrap();
            let star = m.threshold(beta).unwrap();
            let at = m.thermo(beta, star).unwrap();
            assert_eq!(at.branch, Branch::AboveThreshold);
            assert!(at.condensate_density.abs() < 1e-12);
            let below = m.selfconsistent_density(beta, star).unwrap();
            assert!((below - at.total_density).abs() < 1e-9);
            let h = 1e-12 * (1.0 + star.abs());
            let left = m.thermo(beta, star - h).unwrap();
            assert_eq!(left.branch, Branch::BelowThreshold);
            assert!((left.pressure - at.pressure).abs() < 1e-9, "{nu} {delta}: {} vs {}", left.pressure, at.pressure);
            assert!((left.total_density - at.total_density).abs() < 1e-7);
        }
    }

    #[test]
    fn gapless_condensate() {
        let m = MeanFieldModel::new(3, 0.0, 1.5).unwrap();
        let rc = perfect_critical_density(3, 1.0).unwrap();
        for mu in [0.2, 1.0, 4.0] {
            let t = m.thermo(1.0, mu).unwrap();
            assert!((t.condensate_density - (mu / 1.5 - rc)).abs() < 1e-14);
        }
        let low = MeanFieldModel::new(2, 0.0, 1.0).unwrap();
        assert!(matches!(low.thermo(1.0, 1.0), Err(Error::Divergence(_))));
    }

    #[test]
    fn legendre_agrees() {
        let m = model();
        for mu in [-3.0, -1.2, -0.99, -0.5, 0.5, 2.0] {
            let rho_max = 2.0 * (f64::abs(mu) + m.delta) / m.lambda + 1.0;
            let (p, argmax) = m.legendre_pressure(1.0, mu, rho_max).unwrap();
            let t = m.thermo(1.0, mu).unwrap();
            assert!((p - t.pressure).abs() <= 1e-9 * t.pressure.abs().max(1e-300), "mu={mu}: {p} vs {}", t.pressure);
            assert!((argmax - t.total_density).abs() < 1e-5);
        }
        assert!(matches!(m.legendre_pressure(1.0, 2.0, 1.0), Err(Error::Bracket(_))));
    }

    #[test]
    fn free_energy_structure() {
        let a = MeanFieldModel::new(3, 0.7, 1.0).unwrap();
        let b = MeanFieldModel::new(3, 0.7, 2.5).unwrap();
        assert_eq!(a.free_energy(1.0, 0.0).unwrap(), 0.0);
        for rho in [0.01, 0.5, 3.0] {
            let d = b.free_energy(1.0, rho).unwrap() - a.free_energy(1.0, rho).unwrap();
            assert!((d - 0.75 * rho * rho).abs() < 1e-12 * (1.0 + rho * rho));
        }
    }
}
