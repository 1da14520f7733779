//! Superstability constants and the n-point energy inequality
//! `Σ_{i<j} v(x_i - x_j) ≥ -B n + A n² / 2V` in a cubic box.

use serde::Serialize;

use super::PairPotential;
use crate::error::{ensure, Result};
use crate::roots::bisect;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperstabilityConstants {
    /// Coefficient of `n²/2V`: `(1 - ε) v̂(0)`.
    pub quadratic: f64,
    /// Coefficient of `-n`: `v(0)/2`.
    pub linear: f64,
    pub epsilon: f64,
    /// Smallest cutoff with `δ(h)/v̂(0) < ε/4`.
    pub cutoff_radius: f64,
    /// Smallest box side with `‖v‖₁ ((L + 2h)^ν - L^ν) / (L^ν v̂(0)) < ε/4`.
    pub min_side: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuperstabilityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl SuperstabilityConstants {
    pub fn new(v: &PairPotential, epsilon: f64) -> Result<Self> {
        ensure!(epsilon > 0.0 && epsilon < 1.0, Domain, "epsilon must lie in (0, 1), got {epsilon}");
        let c = v.characterize()?;
        ensure!(c.vhat0 > 0.0, Domain, "superstability needs a potential with positive integral");
        let target = 0.25 * epsilon * c.vhat0;
        let excess = |h: f64| Ok(v.tail_mass(h)? - target);

        let mut hi = v.profile.length() / v.scale;
        let mut lo = 0.0;
        if excess(hi)? >= 0.0 {
            loop {
                lo = hi;
                hi *= 2.0;
                if excess(hi)? < 0.0 {
                    break;
                }
            }
        }
        // f(lo) ≥ 0 > f(hi); the bracket end keeps the strict inequality
        let (_, cutoff_radius) = bisect(|h| Ok(-excess(h)?), lo, hi, 1e-9 * hi)?;

        let ratio = 0.25 * epsilon * c.vhat0 / c.l1_norm;
        let nu = v.nu as f64;
        let min_side = 2.0 * cutoff_radius / ((1.0 + ratio).powf(1.0 / nu) - 1.0) * (1.0 + 1e-9);
        Ok(Self {
            quadratic: (1.0 - epsilon) * c.vhat0,
            linear: 0.5 * c.v0,
            epsilon,
            cutoff_radius,
            min_side,
        })
    }

    /// Evaluates both sides of the inequality for distinct points in `[0, side]^ν`.
    pub fn check(&self, v: &PairPotential, points: &[Vec<f64>], side: f64) -> Result<SuperstabilityCheck> {
        let n = points.len();
        ensure!(n >= 2, Domain, "need at least two points, got {n}");
        ensure!(
            side >= self.min_side,
            Domain,
            "box side {side} is below the minimal side {}",
            self.min_side
        );
        let nu = v.nu as usize;
        for p in points {
            ensure!(p.len() == nu, Domain, "point {p:?} does not have {nu} coordinates");
            ensure!(
                p.iter().all(|x| (0.0..=side).contains(x)),
                Domain,
                "point {p:?} lies outside the box [0, {side}]^{nu}"
            );
        }
        let mut lhs = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                let r2: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                ensure!(r2 > 0.0, Domain, "points {i} and {j} coincide");
                lhs += v.value(r2.sqrt());
            }
        }
        let volume = side.powi(nu as i32);
        let n = n as f64;
        let rhs = -self.linear * n + self.quadratic * n * n / (2.0 * volume);
        Ok(SuperstabilityCheck { lhs, rhs, holds: lhs >= rhs })
    }
}

/// Computes the constants for `epsilon` and checks one configuration.
pub fn check_superstability_inequality(
    v: &PairPotential,
    points: &[Vec<f64>],
    side: f64,
    epsilon: f64,
) -> Result<SuperstabilityCheck> {
    SuperstabilityConstants::new(v, epsilon)?.check(v, points, side)
}
