//! Finite-volume mean-field gas in a periodic cube of side `L`.
//!
//! The mean-field term depends on the total particle number only, so the
//! grand partition function factorizes over canonical sectors:
//! `Ξ = Σ_n exp(βμn - βλn²/2V) Z_n`, with `Z_n` the canonical partition
//! function of the free gas whose zero mode sits at `-Δ`. `Z_n` follows from
//! the standard recursion `Z_n = (1/n) Σ_j S_j Z_{n-j}`,
//! `S_j = Σ_k e^{-jβε_k}`, carried out entirely in log space.

use std::f64::consts::{LN_10, PI};

use serde::Serialize;

use crate::error::{ensure, Error, Result};
use crate::meanfield::MeanFieldModel;
use crate::perfect::{check_nu_beta, gapped_critical_density, thermal_factor};

/// Relative weight allowed for the last retained particle-number sector.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Boltzmann-weight floor defining the default mode cutoff `ε ≤ 14 ln 10 / β`.
const CUTOFF_DECADES: f64 = 14.0;

/// Distinct single-particle energy with its degeneracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: u64,
}

/// Energy levels `(2π/L)² |n|²` with `ε ≤ k_cut`; the zero mode is moved to
/// `-Δ` and listed first.
pub fn mode_energies(side: f64, nu: u32, k_cut: f64, delta: f64) -> Result<Vec<Level>> {
    ensure!(side > 0.0 && side.is_finite(), Domain, "box side must be finite and > 0, got {side}");
    ensure!(nu >= 1, Domain, "dimension must be >= 1, got {nu}");
    ensure!(delta >= 0.0 && delta.is_finite(), Domain, "gap must be finite and >= 0, got {delta}");
    ensure!(k_cut > 0.0 && k_cut.is_finite(), Cutoff, "mode cutoff must be finite and > 0, got {k_cut}");
    let unit = (2.0 * PI / side).powi(2);
    let mut m_max = (k_cut / unit).floor() as usize;
    while (m_max as f64 + 1.0) * unit <= k_cut {
        m_max += 1;
    }
    while m_max > 0 && m_max as f64 * unit > k_cut {
        m_max -= 1;
    }
    // number of integer vectors with |n|² = m, built one axis at a time
    let mut axis = vec![0u64; m_max + 1];
    axis[0] = 1;
    let mut k = 1;
    while k * k <= m_max {
        axis[k * k] = 2;
        k += 1;
    }
    let mut counts = axis.clone();
    for _ in 1..nu {
        let mut next = vec![0u64; m_max + 1];
        for (a, &ca) in counts.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in axis.iter().enumerate().take(m_max + 1 - a) {
                if cb != 0 {
                    next[a + b] += ca * cb;
                }
            }
        }
        counts = next;
    }
    let mut levels = vec![Level { energy: -delta, multiplicity: 1 }];
    for (m, &c) in counts.iter().enumerate().skip(1) {
        if c > 0 {
            levels.push(Level { energy: m as f64 * unit, multiplicity: c });
        }
    }
    Ok(levels)
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `log Z_n` for `n = 0..=n_max`.
pub fn canonical_log_partitions(levels: &[Level], beta: f64, n_max: usize) -> Result<Vec<f64>> {
    ensure!(beta > 0.0 && beta.is_finite(), Domain, "beta must be positive and finite, got {beta}");
    ensure!(!levels.is_empty(), Cutoff, "empty mode set");
    let log_s: Vec<f64> = (0..=n_max)
        .map(|j| {
            let j = j as f64;
            log_sum_exp(levels.iter().map(|l| (l.multiplicity as f64).ln() - j * beta * l.energy))
        })
        .collect();
    let mut log_z = Vec::with_capacity(n_max + 1);
    log_z.push(0.0);
    for n in 1..=n_max {
        let value = log_sum_exp((1..=n).map(|j| log_s[j] + log_z[n - j])) - (n as f64).ln();
        ensure!(value.is_finite(), Numeric, "log Z_{n} is not finite");
        log_z.push(value);
    }
    Ok(log_z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrandSums {
    pub log_xi: f64,
    pub pressure: f64,
    pub total_density: f64,
    pub condensate_density: f64,
    pub n2_over_v2: f64,
    /// Normalized weight of the `n = n_max` sector.
    pub tail_weight: f64,
    pub n_max: usize,
}

/// Grand-canonical sums over `n ≤ n_max` without any tail check. The zero
/// mode is `levels[0]`.
pub fn grand_sums(
    levels: &[Level],
    beta: f64,
    mu: f64,
    lambda: f64,
    volume: f64,
    n_max: usize,
) -> Result<GrandSums> {
    ensure!(volume > 0.0, Domain, "volume must be > 0, got {volume}");
    ensure!(lambda >= 0.0 && lambda.is_finite(), Domain, "coupling must be finite and >= 0, got {lambda}");
    ensure!(
        levels.first().map(|l| l.multiplicity) == Some(1),
        Domain,
        "the first level must be the non-degenerate zero mode"
    );
    let log_z = canonical_log_partitions(levels, beta, n_max)?;
    let log_w: Vec<f64> = log_z
        .iter()
        .enumerate()
        .map(|(n, lz)| {
            let n = n as f64;
            beta * mu * n - beta * lambda * n * n / (2.0 * volume) + lz
        })
        .collect();
    let log_xi = log_sum_exp(log_w.iter().copied());
    ensure!(log_xi.is_finite(), Numeric, "grand partition function is not finite");
    let boost = (-beta * levels[0].energy).exp();
    let mut zero_occupation = 0.0;
    let (mut n1, mut n2, mut n0) = (0.0, 0.0, 0.0);
    for (n, lw) in log_w.iter().enumerate() {
        if n > 0 {
            zero_occupation = boost * (log_z[n - 1] - log_z[n]).exp() * (1.0 + zero_occupation);
        }
        let w = (lw - log_xi).exp();
        let nf = n as f64;
        n1 += w * nf;
        n2 += w * nf * nf;
        n0 += w * zero_occupation;
    }
    Ok(GrandSums {
        log_xi,
        pressure: log_xi / (beta * volume),
        total_density: n1 / volume,
        condensate_density: n0 / volume,
        n2_over_v2: n2 / (volume * volume),
        tail_weight: (log_w[n_max] - log_xi).exp(),
        n_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiniteVolumeModel {
    pub side: f64,
    pub nu: u32,
    pub delta: f64,
    pub lambda: f64,
    pub beta: f64,
    pub mu: f64,
    /// Mode energy cutoff; `None` uses `14 ln 10 / β`.
    pub k_cut: Option<f64>,
    /// Particle-number truncation; `None` picks one and doubles it until the
    /// tail criterion holds.
    pub n_max: Option<usize>,
}

impl FiniteVolumeModel {
    pub fn new(side: f64, nu: u32, delta: f64, lambda: f64, beta: f64, mu: f64) -> Self {
        Self { side, nu, delta, lambda, beta, mu, k_cut: None, n_max: None }
    }

    pub fn volume(&self) -> f64 {
        self.side.powi(self.nu as i32)
    }

    pub fn cutoff(&self) -> f64 {
        self.k_cut.unwrap_or(CUTOFF_DECADES * LN_10 / self.beta)
    }

    fn default_n_max(&self) -> usize {
        let rho_c = gapped_critical_density(self.nu, self.beta, self.delta)
            .unwrap_or_else(|_| thermal_factor(self.nu, self.beta));
        let rho = rho_c.max((self.mu.abs() + self.delta) / self.lambda);
        ((4.0 * self.volume() * rho).ceil() as usize).max(16)
    }
}

/// Grand-canonical pressure and densities of the finite-volume model.
pub fn fv_grand(model: &FiniteVolumeModel) -> Result<GrandSums> {
    check_nu_beta(model.nu, model.beta)?;
    ensure!(model.lambda > 0.0 && model.lambda.is_finite(), Domain, "coupling must be finite and > 0, got {}", model.lambda);
    ensure!(model.mu.is_finite(), Domain, "chemical potential must be finite, got {}", model.mu);
    let levels = mode_energies(model.side, model.nu, model.cutoff(), model.delta)?;
    let volume = model.volume();
    let mut n_max = model.n_max.unwrap_or_else(|| model.default_n_max());
    loop {
        let sums = grand_sums(&levels, model.beta, model.mu, model.lambda, volume, n_max)?;
        if sums.tail_weight < TAIL_TOLERANCE {
            return Ok(sums);
        }
        if model.n_max.is_some() {
            return Err(Error::Truncation { n_max, suggested: 2 * n_max });
        }
        n_max *= 2;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub side: f64,
    pub fv_pressure: Option<f64>,
    pub fv_total_density: Option<f64>,
    pub fv_condensate_density: Option<f64>,
    pub mf_pressure: f64,
    pub mf_total_density: f64,
    pub mf_condensate_density: f64,
    pub pressure_gap: Option<f64>,
    pub total_density_gap: Option<f64>,
    pub condensate_gap: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Pressure gaps never increase along the side list (plateaus allowed).
    pub pressure_gap_monotone: bool,
}

/// Finite-volume values against the thermodynamic-limit closed forms along
/// ascending box sides. Per-side failures are kept in their row.
pub fn convergence_report(base: &FiniteVolumeModel, sides: &[f64]) -> Result<ConvergenceReport> {
    ensure!(!sides.is_empty(), Domain, "side list is empty");
    ensure!(sides.windows(2).all(|w| w[1] > w[0]), Domain, "side list must be ascending");
    let mf = MeanFieldModel::new(base.nu, base.delta, base.lambda)?.thermo(base.beta, base.mu)?;
    let row = |side: f64| {
        let model = FiniteVolumeModel { side, ..*base };
        let (fv, error) = match fv_grand(&model) {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e.to_string())),
        };
        ConvergenceRow {
            side,
            fv_pressure: fv.map(|s| s.pressure),
            fv_total_density: fv.map(|s| s.total_density),
            fv_condensate_density: fv.map(|s| s.condensate_density),
            mf_pressure: mf.pressure,
            mf_total_density: mf.total_density,
            mf_condensate_density: mf.condensate_density,
            pressure_gap: fv.map(|s| (s.pressure - mf.pressure).abs()),
            total_density_gap: fv.map(|s| (s.total_density - mf.total_density).abs()),
            condensate_gap: fv.map(|s| (s.condensate_density - mf.condensate_density).abs()),
            error,
        }
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<ConvergenceRow> = {
        use rayon::prelude::*;
        sides.par_iter().map(|&s| row(s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<ConvergenceRow> = sides.iter().map(|&s| row(s)).collect();

    let gaps: Vec<Option<f64>> = rows.iter().map(|r| r.pressure_gap).collect();
    let pressure_gap_monotone = gaps.windows(2).all(|w| match (w[0], w[1]) {
        (Some(a), Some(b)) => b <= a * (1.0 + 1e-12),
        _ => false,
    });
    Ok(ConvergenceReport { rows, pressure_gap_monotone })
}

/// Brute-force grand sums over every occupation vector of the individual
/// modes with total number `≤ n_max`. Exponential cost; for checks only.
pub fn enumerate_grand(
    levels: &[Level],
    beta: f64,
    mu: f64,
    lambda: f64,
    volume: f64,
    n_max: usize,
) -> Result<GrandSums> {
    let energies: Vec<f64> = levels
        .iter()
        .flat_map(|l| std::iter::repeat_n(l.energy, l.multiplicity as usize))
        .collect();
    ensure!(energies.len() <= 8, Domain, "too many modes ({}) for enumeration", energies.len());
    let mut log_terms = Vec::new();
    let mut totals = Vec::new();
    let mut zeros = Vec::new();
    let mut occupation = vec![0usize; energies.len()];
    loop {
        let n: usize = occupation.iter().sum();
        let energy: f64 = occupation.iter().zip(&energies).map(|(k, e)| *k as f64 * e).sum();
        let nf = n as f64;
        log_terms.push(beta * mu * nf - beta * lambda * nf * nf / (2.0 * volume) - beta * energy);
        totals.push(nf);
        zeros.push(occupation[0] as f64);
        // odometer over vectors with Σ ≤ n_max
        let mut i = 0;
        loop {
            if i == occupation.len() {
                let log_xi = log_sum_exp(log_terms.iter().copied());
                let weights: Vec<f64> = log_terms.iter().map(|t| (t - log_xi).exp()).collect();
                let dot = |x: &[f64]| weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
                let squares: Vec<f64> = totals.iter().map(|n| n * n).collect();
                let tail: f64 = weights.iter().zip(&totals).filter(|(_, n)| **n as usize == n_max).map(|(w, _)| w).sum();
                return Ok(GrandSums {
                    log_xi,
                    pressure: log_xi / (beta * volume),
                    total_density: dot(&totals) / volume,
                    condensate_density: dot(&zeros) / volume,
                    n2_over_v2: dot(&squares) / (volume * volume),
                    tail_weight: tail,
                    n_max,
                });
            }
            if occupation.iter().sum::<usize>() < n_max {
                occupation[i] += 1;
                break;
            }
            occupation[i] = 0;
            i += 1;
        }
    }
}
