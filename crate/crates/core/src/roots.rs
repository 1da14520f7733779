//! Bracketing solvers shared by the thermodynamic modules.

use crate::error::{Error, Result};

/// Bisection on a bracket `[lo, hi]` where `f(lo) < 0 ≤ f(hi)` (or the
/// reverse orientation). Iterates until the bracket is narrower than `tol`
/// or the floating-point midpoint coincides with an endpoint.
///
/// Returns the final bracket `(lo, hi)`; `hi` keeps the sign of `f(hi)`.
pub fn bisect<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo.is_nan() || f_hi.is_nan() || (f_lo >= 0.0) == (f_hi >= 0.0) {
        return Err(Error::Bracket(format!(
            "no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})"
        )));
    }
    let hi_positive = f_hi >= 0.0;
    for _ in 0..2100 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid)?;
        if (fm >= 0.0) == hi_positive {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_maximize<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..400 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let (mut best_x, mut best_f) = if fc >= fd { (c, fc) } else { (d, fd) };
    for x in [a, b] {
        let fx = f(x)?;
        if fx > best_f {
            best_x = x;
            best_f = fx;
        }
    }
    Ok((best_x, best_f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt2() {
        let (lo, hi) = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 0.0).unwrap();
        assert!((hi - 2f64.sqrt()).abs() < 1e-15);
        assert!(hi * hi - 2.0 >= 0.0 && lo * lo - 2.0 < 0.0);
    }

    #[test]
    fn bisect_reversed_orientation() {
        let (_, hi) = bisect(|x| Ok(1.0 - x), 0.0, 3.0, 1e-12).unwrap();
        assert!((hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(matches!(bisect(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-9), Err(Error::Bracket(_))));
    }

    #[test]
    fn golden_parabola() {
        let (x, v) = golden_maximize(|x| Ok(-(x - 0.3) * (x - 0.3) + 2.0), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn golden_boundary_maximum() {
        let (x, _) = golden_maximize(|x| Ok(-x), 0.0, 5.0, 1e-10).unwrap();
        assert_eq!(x, 0.0);
    }
}
