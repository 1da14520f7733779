//! Adaptive Gauss-Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Integral estimate with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]` to `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    const MAX_INTERVALS: usize = 4000;
    let first = kronrod(&f, a, b);
    if !first.value.is_finite() {
        return Err(Error::Numeric(format!("integrand is not finite on [{a}, {b}]")));
    }
    let mut intervals = vec![(a, b, first)];
    let mut total = first;
    while total.error > abs_tol.max(rel_tol * total.value.abs()) {
        if intervals.len() >= MAX_INTERVALS {
            return Err(Error::Accuracy(format!(
                "quadrature on [{a}, {b}] stalled at error {:.3e} (value {:.6e})",
                total.error, total.value
            )));
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("non-empty interval list");
        let (lo, hi, est) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval collapsed to adjacent floats; accept what we have
            intervals.push((lo, hi, Estimate { value: est.value, error: 0.0 }));
        } else {
            let left = kronrod(&f, lo, mid);
            let right = kronrod(&f, mid, hi);
            intervals.push((lo, mid, left));
            intervals.push((mid, hi, right));
        }
        total = intervals.iter().fold(Estimate { value: 0.0, error: 0.0 }, |acc, iv| Estimate {
            value: acc.value + iv.2.value,
            error: acc.error + iv.2.error,
        });
        if !total.value.is_finite() || total.error.is_nan() {
            return Err(Error::Numeric(format!("integrand is not finite on [{a}, {b}]")));
        }
    }
    Ok(total)
}

/// Integrates `f` over `[a, ∞)` in panels of geometrically growing width,
/// stopping once a panel of `magnitude` (an integrable majorant of `|f|`)
/// falls below `cutoff` relative to the accumulated magnitude.
pub fn integrate_to_infinity<F, M>(
    f: F,
    magnitude: M,
    a: f64,
    first_panel: f64,
    rel_tol: f64,
) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
    M: Fn(f64) -> f64,
{
    let mut lo = a;
    let mut width = first_panel;
    let mut total = Estimate { value: 0.0, error: 0.0 };
    let mut mass = 0.0;
    for _ in 0..200 {
        let hi = lo + width;
        let m = integrate(&magnitude, lo, hi, 1e-300, 1e-6)?.value;
        mass += m;
        if m > 0.0 {
            let piece = integrate(&f, lo, hi, rel_tol * m * 1e-3, rel_tol)?;
            total.value += piece.value;
            total.error += piece.error;
        }
        if m <= 1e-17 * mass || (mass == 0.0 && lo > a + 64.0 * first_panel) {
            return Ok(total);
        }
        lo = hi;
        width *= 1.5;
    }
    Err(Error::Integrability(format!(
        "integral from {a} to infinity did not converge"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let est = integrate(|x| x.powi(5) - 3.0 * x * x, 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((est.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let est = integrate(|x| (50.0 * x).sin(), 0.0, std::f64::consts::PI, 1e-13, 1e-13).unwrap();
        assert!(est.value.abs() < 1e-12);
        let est = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12, 1e-12).unwrap();
        let exact = 2.0 / 1e-2 * (1.0f64 / 1e-2).atan();
        assert!((est.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn semi_infinite_gaussian() {
        let est = integrate_to_infinity(
            |x: f64| (-x * x).exp(),
            |x: f64| (-x * x).exp(),
            0.0,
            1.0,
            1e-13,
        )
        .unwrap();
        assert!((est.value - 0.5 * std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }
}
