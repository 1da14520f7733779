//! Tabulated radial profiles with monotone cubic (PCHIP) interpolation.

use std::path::Path;

use crate::error::{ensure, Error, Result};

/// Radial samples `(r_i, v_i)` with Fritsch-Carlson slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    r: Vec<f64>,
    v: Vec<f64>,
    slopes: Vec<f64>,
}

impl Table {
    /// Builds the interpolant. The grid must start at `r = 0`, be strictly
    /// ascending, and end where the profile has decayed to zero (the profile
    /// is taken to vanish beyond the last node).
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        ensure!(r.len() == v.len(), Parse, "table has {} radii but {} values", r.len(), v.len());
        ensure!(r.len() >= 2, Parse, "table needs at least two rows");
        ensure!(r.iter().chain(&v).all(|x| x.is_finite()), Parse, "table contains non-finite entries");
        ensure!(r[0] == 0.0, Domain, "table must start at r = 0, got {}", r[0]);
        for w in r.windows(2) {
            ensure!(w[1] > w[0], Parse, "radii must be strictly ascending ({} then {})", w[0], w[1]);
        }
        let peak = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let last = *v.last().expect("non-empty");
        ensure!(
            last.abs() <= 1e-12 * peak.max(f64::MIN_POSITIVE),
            Integrability,
            "table ends at r = {} with value {last}; the profile must decay to 0 within the table",
            r[r.len() - 1]
        );
        let slopes = pchip_slopes(&r, &v);
        Ok(Self { r, v, slopes })
    }

    /// Parses the two-column text format: `r value` per line, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            ensure!(
                fields.len() == 2,
                Parse,
                "line {}: expected two columns `r value`, got {:?}",
                lineno + 1,
                line
            );
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: not a number: {s:?}", lineno + 1)))
            };
            r.push(parse(fields[0])?);
            v.push(parse(fields[1])?);
        }
        Self::new(r, v)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    /// Support radius: the profile is zero beyond it.
    pub fn cutoff(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.r.len();
        if x >= self.r[n - 1] {
            return 0.0;
        }
        if x <= 0.0 {
            return self.v[0];
        }
        let i = self.r.partition_point(|&ri| ri <= x) - 1;
        let h = self.r[i + 1] - self.r[i];
        let t = (x - self.r[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.v[i] + h10 * h * self.slopes[i] + h01 * self.v[i + 1] + h11 * h * self.slopes[i + 1]
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        if delta[i - 1] * delta[i] > 0.0 {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// Shape-preserving three-point end condition.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}
