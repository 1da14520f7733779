//! Perfect Bose gas thermodynamics in the continuum limit.
//!
//! Units: `ħ²/2m = 1`, `k_B = 1`, so a plane wave of momentum `k` has energy
//! `k²` and the thermal factor is `(4πβ)^{-ν/2}`:
//!
//! ```text
//! p^P(β, μ) = β^{-1} (4πβ)^{-ν/2} g_{ν/2+1}(βμ)
//! ρ^P(β, μ) =        (4πβ)^{-ν/2} g_{ν/2}(βμ)
//! ```
//!
//! With a gap `Δ` on the zero mode only, the continuum quantities are unchanged
//! for `μ < -Δ`; the critical density becomes `ρ^P(β, -Δ)`, finite in every
//! dimension once `Δ > 0`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::roots::bisect;
use crate::special::bose_function;

/// Evaluation point in reduced units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoState {
    pub nu: u32,
    pub beta: f64,
    pub mu: f64,
}

impl ThermoState {
    pub fn new(nu: u32, beta: f64, mu: f64) -> Result<Self> {
        check_nu_beta(nu, beta)?;
        ensure!(!mu.is_nan(), Domain, "chemical potential is NaN");
        Ok(Self { nu, beta, mu })
    }

    /// Single-particle energy of a plane wave with momentum modulus `k`.
    pub fn energy(k: f64) -> f64 {
        k * k
    }
}

/// Pressure and density of the perfect gas at one state point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerfectGasPoint {
    pub pressure: f64,
    pub density: f64,
}

pub(crate) fn check_nu_beta(nu: u32, beta: f64) -> Result<()> {
    ensure!(nu >= 1, Domain, "dimension must be >= 1, got {nu}");
    ensure!(beta > 0.0 && beta.is_finite(), Domain, "beta must be positive and finite, got {beta}");
    Ok(())
}

/// `(4πβ)^{-ν/2}`, the inverse thermal volume.
pub fn thermal_factor(nu: u32, beta: f64) -> f64 {
    (4.0 * PI * beta).powf(-0.5 * nu as f64)
}

pub(crate) fn pressure_at(nu: u32, beta: f64, mu: f64) -> Result<f64> {
    ensure!(mu <= 0.0, Domain, "perfect gas pressure undefined for mu = {mu} > 0");
    Ok(thermal_factor(nu, beta) / beta * bose_function(0.5 * nu as f64 + 1.0, beta * mu)?)
}

pub(crate) fn density_at(nu: u32, beta: f64, mu: f64) -> Result<f64> {
    ensure!(mu <= 0.0, Domain, "perfect gas density undefined for mu = {mu} > 0");
    match bose_function(0.5 * nu as f64, beta * mu) {
        Ok(g) => Ok(thermal_factor(nu, beta) * g),
        Err(Error::Divergence(_)) => Err(Error::Divergence(format!(
            "perfect gas density diverges at mu = 0 in dimension {nu}"
        ))),
        Err(e) => Err(e),
    }
}

/// `p^P(β, μ)` for `μ ≤ 0`.
pub fn perfect_pressure(state: &ThermoState) -> Result<f64> {
    pressure_at(state.nu, state.beta, state.mu)
}

/// `ρ^P(β, μ)`; `μ = 0` diverges for `ν ≤ 2`.
pub fn perfect_density(state: &ThermoState) -> Result<f64> {
    density_at(state.nu, state.beta, state.mu)
}

pub fn perfect_point(state: &ThermoState) -> Result<PerfectGasPoint> {
    Ok(PerfectGasPoint {
        pressure: perfect_pressure(state)?,
        density: perfect_density(state)?,
    })
}

/// Gapless critical density `ρ_c^P(β) = ρ^P(β, 0)`, finite only for `ν > 2`.
pub fn perfect_critical_density(nu: u32, beta: f64) -> Result<f64> {
    check_nu_beta(nu, beta)?;
    ensure!(nu > 2, Divergence, "critical density of the gapless gas is infinite for nu = {nu} <= 2");
    density_at(nu, beta, 0.0)
}

/// Critical density `ρ^P(β, -Δ)` of the gas with zero-mode gap `Δ ≥ 0`.
pub fn gapped_critical_density(nu: u32, beta: f64, delta: f64) -> Result<f64> {
    check_nu_beta(nu, beta)?;
    ensure!(delta >= 0.0, Domain, "gap must be >= 0, got {delta}");
    if delta == 0.0 {
        return perfect_critical_density(nu, beta);
    }
    density_at(nu, beta, -delta)
}

/// Sentinel returned for `μ̄` when `ρ = 0` (the formal limit `μ̄ → -∞`).
pub const EMPTY_MU: f64 = -1.0e300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InversionStatus {
    /// `ρ^P(β, μ̄) = ρ` was solved with `μ̄ < mu_cap`.
    Solved,
    /// `ρ ≥ ρ^P(β, mu_cap)`: the chemical potential sticks at the cap.
    Saturated,
    /// `ρ = 0`: `μ̄` is [`EMPTY_MU`].
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvertedDensity {
    pub mu: f64,
    pub status: InversionStatus,
}

/// Thermodynamic-limit chemical potential `μ̄(β, ρ)` capped at `mu_cap ≤ 0`.
pub fn invert_density(nu: u32, beta: f64, rho: f64, mu_cap: f64) -> Result<InvertedDensity> {
    check_nu_beta(nu, beta)?;
    ensure!(rho >= 0.0 && rho.is_finite(), Domain, "density must be finite and >= 0, got {rho}");
    ensure!(mu_cap <= 0.0, Domain, "chemical potential cap must be <= 0, got {mu_cap}");
    if rho == 0.0 {
        return Ok(InvertedDensity { mu: EMPTY_MU, status: InversionStatus::Empty });
    }
    let cap_density = match density_at(nu, beta, mu_cap) {
        Ok(d) => d,
        Err(Error::Divergence(_)) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    if rho >= cap_density {
        return Ok(InvertedDensity { mu: mu_cap, status: InversionStatus::Saturated });
    }
    let mut step = 1.0 / beta;
    let mut lo = mu_cap - step;
    while density_at(nu, beta, lo)? >= rho {
        step *= 2.0;
        lo = mu_cap - step;
        ensure!(lo.is_finite(), Numeric, "could not bracket density {rho}");
    }
    let (_, hi) = bisect(
        |mu| {
            let d = if mu == mu_cap { cap_density } else { density_at(nu, beta, mu)? };
            Ok(d - rho)
        },
        lo,
        mu_cap,
        0.0,
    )?;
    Ok(InvertedDensity { mu: hi, status: InversionStatus::Solved })
}

/// Canonical free energy `f^{P,Δ}(β, ρ)` of the perfect gas with gap `Δ`.
pub fn perfect_free_energy_gap(nu: u32, beta: f64, rho: f64, delta: f64) -> Result<f64> {
    check_nu_beta(nu, beta)?;
    ensure!(rho >= 0.0, Domain, "density must be >= 0, got {rho}");
    ensure!(delta >= 0.0, Domain, "gap must be >= 0, got {delta}");
    if rho == 0.0 {
        return Ok(0.0);
    }
    let inv = invert_density(nu, beta, rho, -delta)?;
    match inv.status {
        InversionStatus::Saturated => Ok(-rho * delta - pressure_at(nu, beta, -delta)?),
        _ => Ok(rho * inv.mu - pressure_at(nu, beta, inv.mu)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;

    const ZETA_3_2: f64 = 2.612_375_348_685_488;
    const ZETA_5_2: f64 = 1.341_487_257_250_917_2;

    /// ν = 3 momentum integrals done by quadrature in `k`.
    fn quadrature_density_3d(beta: f64, mu: f64) -> f64 {
        // k = t² removes the 1/k² singularity at mu = 0
        let f = |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            let k = t * t;
            let e = beta * (k * k - mu);
            2.0 * t * k * k / f64::exp_m1(e)
        };
        integrate(f, 0.0, 8.0, 1e-15, 1e-13).unwrap().value / (2.0 * PI * PI)
    }

    fn quadrature_pressure_3d(beta: f64, mu: f64) -> f64 {
        let f = |k: f64| -k * k * (-f64::exp(-beta * (k * k - mu))).ln_1p();
        integrate(f, 0.0, 40.0, 1e-15, 1e-13).unwrap().value / (2.0 * PI * PI) / beta
    }

    #[test]
    fn critical_density_values() {
        let rc = perfect_critical_density(3, 1.0).unwrap();
        assert!((rc - ZETA_3_2 / (4.0 * PI).powf(1.5)).abs() < 1e-14);
        assert!((rc - 0.058_643).abs() < 1e-6);
        let ratio = perfect_critical_density(3, 0.25).unwrap() / rc;
        assert!((ratio - 8.0).abs() < 1e-12);
        assert!(matches!(perfect_critical_density(2, 1.0), Err(Error::Divergence(_))));
        let gapped = gapped_critical_density(1, 1.0, 1.0).unwrap();
        assert!(gapped.is_finite() && gapped > 0.0);
    }

    #[test]
    fn quadrature_oracle_3d() {
        let p0 = perfect_pressure(&ThermoState::new(3, 1.0, 0.0).unwrap()).unwrap();
        assert!((p0 - ZETA_5_2 / (4.0 * PI).powf(1.5)).abs() < 1e-14);
        for (beta, mu) in [(1.0, 0.0), (1.0, -1.0), (0.3, -0.2), (2.0, -0.01)] {
            let s = ThermoState::new(3, beta, mu).unwrap();
            let d = perfect_density(&s).unwrap();
            let p = perfect_pressure(&s).unwrap();
            assert!((d - quadrature_density_3d(beta, mu)).abs() < 1e-11, "rho at {beta},{mu}");
            assert!((p - quadrature_pressure_3d(beta, mu)).abs() < 1e-11, "p at {beta},{mu}");
        }
        let d = perfect_density(&ThermoState::new(3, 1.0, -1.0).unwrap()).unwrap();
        assert!((d - 0.009_619).abs() < 5e-6);
    }

    #[test]
    fn pressure_derivative_is_density() {
        let h = 1e-5;
        for nu in [1, 2, 3, 4] {
            for beta in [0.1, 1.0, 5.0] {
                for mu in [-3.0, -1.0, -0.2, -0.01] {
                    if nu <= 2 && mu > -0.1 {
                        // ρ ∝ (-μ)^{-1/2} there; the stencil error exceeds the tolerance
                        continue;
                    }
                    let p = |m: f64| pressure_at(nu, beta, m).unwrap();
                    let fd = (p(mu + h) - p(mu - h)) / (2.0 * h);
                    let rho = density_at(nu, beta, mu).unwrap();
                    assert!((fd - rho).abs() < 1e-6, "nu={nu} beta={beta} mu={mu}: {fd} vs {rho}");
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(perfect_pressure(&ThermoState::new(3, 1.0, 0.1).unwrap()), Err(Error::Domain(_))));
        assert!(matches!(perfect_density(&ThermoState::new(2, 1.0, 0.0).unwrap()), Err(Error::Divergence(_))));
        assert!(ThermoState::new(0, 1.0, 0.0).is_err());
        assert!(ThermoState::new(3, 0.0, 0.0).is_err());
        let s = ThermoState::new(3, 1.0, -1e4).unwrap();
        assert_eq!(perfect_pressure(&s).unwrap(), 0.0);
    }

    #[test]
    fn inversion_cases() {
        let empty = invert_density(3, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(empty.status, InversionStatus::Empty);
        assert_eq!(empty.mu, EMPTY_MU);

        let target = density_at(3, 1.0, -1.0).unwrap();
        let inv = invert_density(3, 1.0, target, 0.0).unwrap();
        assert_eq!(inv.status, InversionStatus::Solved);
        assert!((inv.mu + 1.0).abs() < 1e-10);

        let rc = perfect_critical_density(3, 1.0).unwrap();
        let sat = invert_density(3, 1.0, 2.0 * rc, -1.0).unwrap();
        assert_eq!(sat.status, InversionStatus::Saturated);
        assert_eq!(sat.mu, -1.0);

        assert!(matches!(invert_density(3, 1.0, -1.0, 0.0), Err(Error::Domain(_))));
        // ν ≤ 2 has no saturation at cap 0
        let inv2 = invert_density(2, 1.0, 50.0, 0.0).unwrap();
        assert_eq!(inv2.status, InversionStatus::Solved);
    }

    #[test]
    fn free_energy_kink_and_convexity() {
        let (nu, beta, delta) = (3, 1.0, 1.0);
        let kink = density_at(nu, beta, -delta).unwrap();
        let left = kink * -delta - pressure_at(nu, beta, -delta).unwrap();
        let f_kink = perfect_free_energy_gap(nu, beta, kink, delta).unwrap();
        assert!((left - f_kink).abs() < 1e-10);
        let right = perfect_free_energy_gap(nu, beta, kink * (1.0 + 1e-12), delta).unwrap();
        assert!((right - f_kink).abs() < 1e-10);

        assert_eq!(perfect_free_energy_gap(nu, beta, 0.0, delta).unwrap(), 0.0);

        let grid: Vec<f64> = (0..60).map(|i| i as f64 * kink / 30.0).collect();
        let f: Vec<f64> = grid.iter().map(|&r| perfect_free_energy_gap(nu, beta, r, delta).unwrap()).collect();
        for i in 1..grid.len() - 1 {
            assert!(f[i] <= 0.5 * (f[i - 1] + f[i + 1]) + 1e-13, "convexity at {}", grid[i]);
        }
    }
}
