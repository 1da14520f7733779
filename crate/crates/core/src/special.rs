//! Riemann zeta and Bose functions.
//!
//! The Bose function `g_s(x) = Li_s(e^x)` is evaluated as a function of the
//! log-fugacity `x = βμ ≤ 0` so that points close to `z = 1` keep full
//! relative precision. Two regimes are used:
//!
//! * `x < -1`: the defining series `Σ e^{nx} / n^s`, which converges at least
//!   as fast as `e^{-n}`.
//! * `-1 ≤ x ≤ 0`: the expansion around `x = 0`,
//!   `Li_s(e^x) = Γ(1-s)(-x)^{s-1} + Σ_k ζ(s-k) x^k / k!` for non-integer `s`
//!   and the harmonic-number variant for integer `s`. Its terms shrink like
//!   `(|x| / 2π)^k`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use statrs::function::gamma::gamma;

use crate::error::{ensure, Result};

/// `B_{2k} / (2k)!` for `k = 1..=10`.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
];

const EM_CUTOFF: usize = 12;

/// Riemann zeta function for real `s != 1`.
pub fn zeta(s: f64) -> Result<f64> {
    ensure!(s.is_finite(), Domain, "zeta argument must be finite, got {s}");
    ensure!(s != 1.0, Divergence, "zeta has a pole at s = 1");
    if s >= 0.5 {
        Ok(zeta_euler_maclaurin(s))
    } else {
        Ok(zeta_reflected(s))
    }
}

fn zeta_euler_maclaurin(s: f64) -> f64 {
    let n = EM_CUTOFF as f64;
    let mut sum: f64 = (1..EM_CUTOFF).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s(s+1)...(s+2k-2) times N^{-s-2k+1}
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if k > 0 {
            let m = 2.0 * k as f64;
            rising *= (s + m - 1.0) * (s + m);
            power /= n * n;
        }
        sum += coeff * rising * power;
    }
    sum
}

fn zeta_reflected(s: f64) -> f64 {
    if s == 0.0 {
        return -0.5;
    }
    if s < 0.0 && s.fract() == 0.0 && (s as i64) % 2 == 0 {
        return 0.0;
    }
    let t = 1.0 - s;
    2f64.powf(s) * PI.powf(s - 1.0) * (0.5 * PI * s).sin() * gamma(t) * zeta_euler_maclaurin(t)
}

/// Number of expansion coefficients kept per order.
const EXPANSION_TERMS: usize = 48;

/// Cached `ζ(s - k)` for half-integer orders `s = m/2`, `m = 1..=64`.
fn half_integer_coefficients(twice_s: usize) -> &'static [f64] {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        (1..=64)
            .map(|m| {
                let s = m as f64 / 2.0;
                (0..EXPANSION_TERMS)
                    .map(|k| {
                        let arg = s - k as f64;
                        if arg == 1.0 {
                            f64::NAN
                        } else if arg >= 0.5 {
                            zeta_euler_maclaurin(arg)
                        } else {
                            zeta_reflected(arg)
                        }
                    })
                    .collect()
            })
            .collect()
    });
    &table[twice_s - 1]
}

fn expansion_coefficients(s: f64) -> Vec<f64> {
    let twice = 2.0 * s;
    if twice.fract() == 0.0 && (1.0..=64.0).contains(&twice) {
        return half_integer_coefficients(twice as usize).to_vec();
    }
    (0..EXPANSION_TERMS)
        .map(|k| {
            let arg = s - k as f64;
            if arg == 1.0 {
                f64::NAN
            } else if arg >= 0.5 {
                zeta_euler_maclaurin(arg)
            } else {
                zeta_reflected(arg)
            }
        })
        .collect()
}

/// Bose function `g_s(x) = Li_s(e^x)` for `s > 0` and log-fugacity `x ≤ 0`.
///
/// `x = -∞` gives 0. At `x = 0` the value is `ζ(s)` for `s > 1`; for
/// `s ≤ 1` the function diverges and an error is returned.
pub fn bose_function(s: f64, x: f64) -> Result<f64> {
    ensure!(s > 0.0 && s.is_finite(), Domain, "order must be positive, got {s}");
    ensure!(!x.is_nan() && x <= 0.0, Domain, "log-fugacity must be <= 0, got {x}");
    if x == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    if x == 0.0 {
        ensure!(s > 1.0, Divergence, "Li_{s}(1) diverges for order <= 1");
        return zeta(s);
    }
    if x < -1.0 {
        Ok(bose_series(s, x))
    } else {
        Ok(bose_expansion(s, x))
    }
}

fn bose_series(s: f64, x: f64) -> f64 {
    let z = x.exp();
    let mut zn = z;
    let mut sum = 0.0;
    for n in 1..10_000 {
        let term = zn / (n as f64).powf(s);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        zn *= z;
    }
    sum
}

fn bose_expansion(s: f64, x: f64) -> f64 {
    let coeffs = expansion_coefficients(s);
    let integer_order = s.fract() == 0.0;
    let mut sum = if integer_order {
        let m = s as usize;
        let mut harmonic = 0.0;
        let mut factorial = 1.0;
        for j in 1..m {
            harmonic += 1.0 / j as f64;
            factorial *= j as f64;
        }
        x.powi(m as i32 - 1) / factorial * (harmonic - (-x).ln())
    } else {
        gamma(1.0 - s) * (-x).powf(s - 1.0)
    };
    let mut power = 1.0; // x^k / k!
    let mut small_run = 0;
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            power *= x / k as f64;
        }
        if c.is_nan() {
            // the k = s - 1 term is absorbed into the logarithmic piece
            continue;
        }
        let term = c * power;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            small_run += 1;
            if small_run >= 2 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    sum
}

/// Polylogarithm `Li_s(z) = Σ_{n≥1} z^n / n^s` on `z ∈ [0, 1]`.
pub fn polylog(s: f64, z: f64) -> Result<f64> {
    ensure!(
        (0.0..=1.0).contains(&z),
        Domain,
        "polylog argument must lie in [0, 1], got {z}"
    );
    if z == 0.0 {
        ensure!(s > 0.0, Domain, "order must be positive, got {s}");
        return Ok(0.0);
    }
    bose_function(s, z.ln())
}
