//! Radial, integrable, positive-type pair potentials.
//!
//! A potential is a radial profile living in `ν` dimensions together with a
//! Van der Waals scale `s`: `v(x) = s^ν base(s|x|)`. Scaling leaves `v̂(0)` and
//! `‖v‖₁` unchanged while `v(0)` picks up the factor `s^ν`.
//!
//! All integrals are radial: `∫ f(|x|) dx = Ω_ν ∫_0^∞ r^{ν-1} f(r) dr` with
//! `Ω_ν` the area of the unit sphere, and the Fourier transform uses the
//! normalized kernel `Λ_ν(qr)` (`cos` for `ν = 1`, `sin(x)/x` for `ν = 3`).

mod superstability;
mod table;

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::error::{ensure, Error, Result};
use crate::quad::{integrate, integrate_to_infinity};

pub use superstability::{check_superstability_inequality, SuperstabilityCheck, SuperstabilityConstants};
pub use table::Table;

/// Relative accuracy requested from the radial quadratures.
const RADIAL_TOL: f64 = 1e-12;

/// Momentum grid on which tabulated profiles are certified.
const CERTIFY_Q_STEP: f64 = 0.1;
const CERTIFY_Q_POINTS: usize = 101;

/// Allowed negative dip of `v̂` (relative to `v̂(0)`) for tabulated profiles.
const CERTIFY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `amplitude · exp(-r² / 2 width²)`
    Gaussian { amplitude: f64, width: f64 },
    /// `amplitude · exp(-rate · r)`
    Exponential { amplitude: f64, rate: f64 },
    /// Interpolated samples, zero beyond the last node.
    Tabulated(Table),
}

impl Profile {
    /// Parses `gaussian:a=1,sigma=1`, `exponential:a=1,m=1` or `table:<path>`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        match name.trim() {
            "gaussian" => {
                let p = parse_params(rest, &["a", "sigma"])?;
                Ok(Profile::Gaussian { amplitude: p[0], width: p[1] })
            }
            "exponential" => {
                let p = parse_params(rest, &["a", "m"])?;
                Ok(Profile::Exponential { amplitude: p[0], rate: p[1] })
            }
            "table" => {
                ensure!(!rest.is_empty(), Parse, "potential spec `table:` needs a file path");
                Ok(Profile::Tabulated(Table::load(std::path::Path::new(rest))?))
            }
            other => Err(Error::Parse(format!(
                "unknown potential `{other}` (expected gaussian, exponential or table)"
            ))),
        }
    }

    fn eval(&self, r: f64) -> f64 {
        match self {
            Profile::Gaussian { amplitude, width } => amplitude * (-0.5 * (r / width).powi(2)).exp(),
            Profile::Exponential { amplitude, rate } => amplitude * (-rate * r).exp(),
            Profile::Tabulated(t) => t.eval(r),
        }
    }

    /// Natural length of the unscaled profile, used to size quadrature panels.
    fn length(&self) -> f64 {
        match self {
            Profile::Gaussian { width, .. } => *width,
            Profile::Exponential { rate, .. } => 1.0 / rate,
            Profile::Tabulated(t) => t.cutoff(),
        }
    }
}

fn parse_params(text: &str, names: &[&str]) -> Result<Vec<f64>> {
    let mut values = vec![None; names.len()];
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("malformed potential parameter `{token}` (expected key=value)")))?;
        let slot = names
            .iter()
            .position(|n| *n == key.trim())
            .ok_or_else(|| Error::Parse(format!("unknown potential parameter `{}` in `{token}`", key.trim())))?;
        let x: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("potential parameter `{token}` is not a number")))?;
        values[slot] = Some(x);
    }
    names
        .iter()
        .zip(values)
        .map(|(n, v)| v.ok_or_else(|| Error::Parse(format!("potential parameter `{n}` missing"))))
        .collect()
}

/// Scalar data `v(0)`, `v̂(0) = ∫v` and `‖v‖₁ = ∫|v|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Characteristics {
    pub v0: f64,
    pub vhat0: f64,
    pub l1_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairPotential {
    profile: Profile,
    nu: u32,
    scale: f64,
}

impl PairPotential {
    /// Validates parameters; tabulated profiles are certified positive type
    /// on a momentum grid before they are accepted.
    pub fn new(profile: Profile, nu: u32) -> Result<Self> {
        ensure!(nu >= 1, Domain, "dimension must be >= 1, got {nu}");
        match &profile {
            Profile::Gaussian { amplitude, width } => {
                ensure!(width.is_finite() && *width > 0.0, Domain, "gaussian width must be > 0, got {width}");
                ensure!(amplitude.is_finite(), Domain, "amplitude must be finite");
                ensure!(*amplitude >= 0.0, NotPositiveType, "negative amplitude {amplitude} is not positive type");
            }
            Profile::Exponential { amplitude, rate } => {
                ensure!(rate.is_finite() && *rate > 0.0, Domain, "exponential rate must be > 0, got {rate}");
                ensure!(amplitude.is_finite(), Domain, "amplitude must be finite");
                ensure!(*amplitude >= 0.0, NotPositiveType, "negative amplitude {amplitude} is not positive type");
            }
            Profile::Tabulated(_) => {}
        }
        let potential = Self { profile, nu, scale: 1.0 };
        if let Profile::Tabulated(t) = &potential.profile {
            let top = t.values()[0];
            ensure!(
                t.values().iter().all(|&x| x <= top),
                NotPositiveType,
                "tabulated profile exceeds its value at r = 0"
            );
            potential.certify()?;
        }
        Ok(potential)
    }

    pub fn from_spec(spec: &str, nu: u32) -> Result<Self> {
        Self::new(Profile::from_spec(spec)?, nu)
    }

    pub fn gaussian(amplitude: f64, width: f64, nu: u32) -> Result<Self> {
        Self::new(Profile::Gaussian { amplitude, width }, nu)
    }

    pub fn exponential(amplitude: f64, rate: f64, nu: u32) -> Result<Self> {
        Self::new(Profile::Exponential { amplitude, rate }, nu)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    /// Accumulated Van der Waals scale (1 for an unscaled potential).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `v_s(x) = s^ν v(s x)`.
    pub fn vdw_scale(&self, factor: f64) -> Result<Self> {
        ensure!(factor.is_finite() && factor > 0.0, Domain, "scale factor must be > 0, got {factor}");
        Ok(Self { profile: self.profile.clone(), nu: self.nu, scale: self.scale * factor })
    }

    /// `v(r)` at distance `r ≥ 0`.
    pub fn value(&self, r: f64) -> f64 {
        self.scale.powi(self.nu as i32) * self.profile.eval(self.scale * r)
    }

    fn sphere_area(&self) -> f64 {
        let half = 0.5 * self.nu as f64;
        2.0 * PI.powf(half) / gamma(half)
    }

    /// `Ω_ν ∫_from^∞ r^{ν-1} f(r) dr` for a radial integrand built from `v`.
    fn radial_integral<F: Fn(f64) -> f64>(&self, f: F, from: f64) -> Result<f64> {
        let area = self.sphere_area();
        let nu = self.nu as i32;
        let weighted = |r: f64| area * r.powi(nu - 1) * f(r);
        let magnitude = |r: f64| area * r.powi(nu - 1) * self.value(r).abs();
        match &self.profile {
            Profile::Tabulated(t) => {
                let pieces: Vec<(f64, f64)> = t
                    .radii()
                    .windows(2)
                    .map(|w| (w[0] / self.scale, w[1] / self.scale))
                    .filter(|&(_, hi)| hi > from)
                    .map(|(lo, hi)| (lo.max(from), hi))
                    .collect();
                let mut mass = 0.0;
                for &(lo, hi) in &pieces {
                    mass += integrate(magnitude, lo, hi, 1e-300, 1e-6)?.value;
                }
                let abs_tol = 1e-3 * RADIAL_TOL * mass;
                let mut total = 0.0;
                for &(lo, hi) in &pieces {
                    total += integrate(weighted, lo, hi, abs_tol, RADIAL_TOL)?.value;
                }
                Ok(total)
            }
            _ => {
                let panel = self.profile.length() / self.scale;
                Ok(integrate_to_infinity(weighted, magnitude, from, panel, RADIAL_TOL)?.value)
            }
        }
    }

    pub fn characterize(&self) -> Result<Characteristics> {
        Ok(Characteristics {
            v0: self.value(0.0),
            vhat0: self.radial_integral(|r| self.value(r), 0.0)?,
            l1_norm: self.radial_integral(|r| self.value(r).abs(), 0.0)?,
        })
    }

    /// `v̂(q) = ∫ v(x) e^{-iqx} dx` by radial quadrature.
    pub fn fourier_at(&self, q: f64) -> Result<f64> {
        ensure!(q >= 0.0 && q.is_finite(), Domain, "momentum must be finite and >= 0, got {q}");
        let kernel = RadialKernel::new(self.nu);
        self.radial_integral(|r| self.value(r) * kernel.eval(q * r), 0.0)
    }

    /// `δ(h) = 2 ∫_{|x| > h} |v(x)| dx`.
    pub fn tail_mass(&self, h: f64) -> Result<f64> {
        ensure!(h >= 0.0, Domain, "tail radius must be >= 0, got {h}");
        Ok(2.0 * self.radial_integral(|r| self.value(r).abs(), h)?)
    }

    /// Certifies `v̂(q) ≥ -tol·v̂(0)` and `v̂(q) ≤ (1 + tol)·v̂(0)` on the grid
    /// `q = 0, 0.1, …, 10`.
    pub fn certify(&self) -> Result<()> {
        let vhat0 = self.fourier_at(0.0)?;
        ensure!(vhat0 > 0.0, NotPositiveType, "integral of the potential must be > 0, got {vhat0}");
        for i in 1..CERTIFY_Q_POINTS {
            let q = i as f64 * CERTIFY_Q_STEP;
            let vq = self.fourier_at(q)?;
            ensure!(
                vq >= -CERTIFY_TOL * vhat0,
                NotPositiveType,
                "Fourier transform is negative at q = {q:.1}: {vq:.6e}"
            );
            ensure!(
                vq <= (1.0 + CERTIFY_TOL) * vhat0,
                NotPositiveType,
                "Fourier transform at q = {q:.1} exceeds its value at 0: {vq:.6e} > {vhat0:.6e}"
            );
        }
        Ok(())
    }
}

/// `Λ_ν(x) = Γ(ν/2) (2/x)^{ν/2-1} J_{ν/2-1}(x)`, normalized to `Λ_ν(0) = 1`.
struct RadialKernel {
    nu: u32,
    poisson_norm: f64,
}

impl RadialKernel {
    fn new(nu: u32) -> Self {
        let poisson_norm = if nu >= 2 {
            let half = 0.5 * nu as f64;
            gamma(half) / (PI.sqrt() * gamma(half - 0.5))
        } else {
            1.0
        };
        Self { nu, poisson_norm }
    }

    fn eval(&self, x: f64) -> f64 {
        match self.nu {
            1 => x.cos(),
            3 => {
                if x.abs() < 1e-3 {
                    let x2 = x * x;
                    1.0 - x2 / 6.0 + x2 * x2 / 120.0
                } else {
                    x.sin() / x
                }
            }
            _ if x == 0.0 => 1.0,
            // Poisson integral c ∫_0^π cos(x cos θ) sin^{ν-2}θ dθ
            nu if nu % 2 == 0 => {
                // smooth and periodic: the trapezoid rule converges geometrically
                let n = x.abs() as usize + 48;
                let h = PI / n as f64;
                let power = nu as i32 - 2;
                // endpoints contribute only when sin^0 = 1
                let mut sum = if power == 0 { x.cos() } else { 0.0 };
                for k in 1..n {
                    let theta = k as f64 * h;
                    sum += (x * theta.cos()).cos() * theta.sin().powi(power);
                }
                self.poisson_norm * sum * h
            }
            nu => {
                // t = cos θ turns the weight into the polynomial (1 - t²)^{(ν-3)/2}
                let power = (nu as i32 - 3) / 2;
                let f = |t: f64| (x * t).cos() * (1.0 - t * t).powi(power);
                let value = integrate(f, -1.0, 1.0, 1e-14, 1e-12).map(|e| e.value).unwrap_or(f64::NAN);
                self.poisson_norm * value
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_fourier(amplitude: f64, width: f64, nu: u32, q: f64) -> f64 {
        amplitude * (2.0 * PI * width * width).powf(0.5 * nu as f64) * (-0.5 * width * width * q * q).exp()
    }

    /// `v̂(q) = a 2^ν π^{(ν-1)/2} Γ((ν+1)/2) m / (m² + q²)^{(ν+1)/2}`.
    fn exponential_fourier(amplitude: f64, rate: f64, nu: u32, q: f64) -> f64 {
        let n = nu as f64;
        amplitude * 2f64.powf(n) * PI.powf(0.5 * (n - 1.0)) * gamma(0.5 * (n + 1.0)) * rate
            / (rate * rate + q * q).powf(0.5 * (n + 1.0))
    }

    #[test]
    fn kernel_matches_closed_forms() {
        // ν = 2 is J0; ν = 5 is 3(sin x - x cos x)/x³
        let j0_at_1 = 0.765_197_686_557_966_6;
        assert!((RadialKernel::new(2).eval(1.0) - j0_at_1).abs() < 1e-14);
        let k5 = RadialKernel::new(5);
        for x in [0.3, 2.0, 7.5] {
            let exact = 3.0 * (f64::sin(x) - x * f64::cos(x)) / (x * x * x);
            assert!((k5.eval(x) - exact).abs() < 1e-12, "x={x}");
        }
        let k4 = RadialKernel::new(4);
        // ν = 4: 2 J1(x)/x, J1(2) = 0.5767248077568734
        assert!((k4.eval(2.0) - 0.576_724_807_756_873_4).abs() < 1e-13);
        assert_eq!(RadialKernel::new(6).eval(0.0), 1.0);
    }

    #[test]
    fn characterize_builtins() {
        let g = PairPotential::gaussian(1.0, 1.0, 3).unwrap().characterize().unwrap();
        assert_eq!(g.v0, 1.0);
        let exact = (2.0 * PI).powf(1.5);
        assert!((g.vhat0 - exact).abs() < 1e-8 * exact);
        assert!((g.l1_norm - g.vhat0).abs() < 1e-12 * exact);
        let e = PairPotential::exponential(1.0, 1.0, 3).unwrap().characterize().unwrap();
        assert!((e.vhat0 - 8.0 * PI).abs() < 1e-8 * 8.0 * PI);
        let z = PairPotential::gaussian(0.0, 1.0, 3).unwrap().characterize().unwrap();
        assert_eq!((z.v0, z.vhat0, z.l1_norm), (0.0, 0.0, 0.0));
    }

    #[test]
    fn fourier_matches_closed_forms() {
        for nu in 1..=5 {
            let g = PairPotential::gaussian(1.3, 0.7, nu).unwrap();
            let e = PairPotential::exponential(0.8, 1.5, nu).unwrap();
            for q in [0.0, 0.5, 1.0, 3.0, 8.0] {
                let (got, exact) = (g.fourier_at(q).unwrap(), gaussian_fourier(1.3, 0.7, nu, q));
                assert!((got - exact).abs() < 1e-9 * gaussian_fourier(1.3, 0.7, nu, 0.0), "gauss nu={nu} q={q}");
                let (got, exact) = (e.fourier_at(q).unwrap(), exponential_fourier(0.8, 1.5, nu, q));
                assert!((got - exact).abs() < 1e-8 * exact.max(1e-3), "exp nu={nu} q={q}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn tail_mass_partitions_the_norm() {
        let v = PairPotential::gaussian(1.0, 1.0, 3).unwrap();
        assert!(v.tail_mass(10.0).unwrap() < 1e-8);
        let l1 = v.characterize().unwrap().l1_norm;
        let h = 1.7;
        let area = 4.0 * PI;
        let inner = integrate(|r| area * r * r * v.value(r), 0.0, h, 1e-15, 1e-14).unwrap().value;
        assert!((v.tail_mass(h).unwrap() + 2.0 * inner - 2.0 * l1).abs() < 1e-10);
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let t = v.tail_mass(0.25 * i as f64).unwrap();
            assert!(t <= prev);
            prev = t;
        }
    }

    #[test]
    fn vdw_scaling() {
        let v = PairPotential::gaussian(1.0, 1.0, 3).unwrap();
        let half = v.vdw_scale(0.5).unwrap().characterize().unwrap();
        assert!((half.v0 - 0.125).abs() < 1e-15);
        assert!((half.vhat0 - (2.0 * PI).powf(1.5)).abs() < 1e-8);
        let twice = v.vdw_scale(0.5).unwrap().vdw_scale(0.3).unwrap().characterize().unwrap();
        let once = v.vdw_scale(0.15).unwrap().characterize().unwrap();
        assert!((twice.v0 - once.v0).abs() < 1e-10);
        assert!((twice.vhat0 - once.vhat0).abs() < 1e-10);
        assert!((twice.l1_norm - once.l1_norm).abs() < 1e-10);
        let s = v.vdw_scale(0.5).unwrap();
        assert!((s.fourier_at(1.0).unwrap() - v.fourier_at(2.0).unwrap()).abs() < 1e-10);
        assert!(v.vdw_scale(0.0).is_err());
    }

    #[test]
    fn specs() {
        let v = PairPotential::from_spec("gaussian:a=1,sigma=2", 3).unwrap();
        assert_eq!(v.profile(), &Profile::Gaussian { amplitude: 1.0, width: 2.0 });
        let v = PairPotential::from_spec("exponential:m=2,a=0.5", 1).unwrap();
        assert_eq!(v.profile(), &Profile::Exponential { amplitude: 0.5, rate: 2.0 });
        let bad = |s: &str| match Profile::from_spec(s) {
            Err(Error::Parse(m)) => m,
            other => panic!("{s}: {other:?}"),
        };
        assert!(bad("gaussian:a=1,sigma").contains("sigma"));
        assert!(bad("gaussian:a=1,width=1").contains("width"));
        assert!(bad("gaussian:a=1").contains("sigma"));
        assert!(bad("square:a=1").contains("square"));
        assert!(bad("gaussian:a=one,sigma=1").contains("a=one"));
        assert!(matches!(PairPotential::from_spec("gaussian:a=-1,sigma=1", 3), Err(Error::NotPositiveType(_))));
    }

    #[test]
    fn tabulated_certification() {
        // sampled gaussian, padded with an exact zero at the end
        let r: Vec<f64> = (0..=120).map(|i| i as f64 * 0.1).collect();
        let mut v: Vec<f64> = r.iter().map(|x| (-0.5 * x * x).exp()).collect();
        *v.last_mut().unwrap() = 0.0;
        let p = PairPotential::new(Profile::Tabulated(Table::new(r.clone(), v).unwrap()), 3).unwrap();
        let c = p.characterize().unwrap();
        assert!((c.vhat0 - (2.0 * PI).powf(1.5)).abs() < 1e-3 * c.vhat0);
        // a square well has an oscillating transform that dips below zero
        let well: Vec<f64> = r.iter().map(|&x| if x < 2.0 { 1.0 } else { 0.0 }).collect();
        let t = Table::new(r, well).unwrap();
        assert!(matches!(PairPotential::new(Profile::Tabulated(t), 3), Err(Error::NotPositiveType(_))));
    }
}
