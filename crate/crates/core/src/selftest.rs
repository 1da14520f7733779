//! End-to-end consistency checks: independent code paths and limits that
//! must agree, run as a suite by the `acceptance` test target and by the
//! command-line `selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    bound_general, bound_lb, bound_lba, delta_min, high_density_gap_condition, high_density_slope, phase_curve,
    Axis, BoundMode, Interaction, PhaseCurveParams,
};
use crate::error::Result;
use crate::finite_volume::{convergence_report, enumerate_grand, grand_sums, mode_energies, FiniteVolumeModel, Level};
use crate::meanfield::{Branch, MeanFieldModel, MeanFieldThermo};
use crate::perfect::gapped_critical_density;
use crate::potentials::{PairPotential, SuperstabilityConstants};
use crate::special::polylog;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: [(u32, &str, Check); 11] = [
    (1, "legendre transform matches closed-form pressure", legendre_agreement),
    (2, "pressure derivatives give densities and fluctuations", derivative_identities),
    (3, "continuity across the mean-field threshold", branch_continuity),
    (4, "finite-volume convergence to the closed forms", finite_volume_convergence),
    (5, "canonical recursion matches exhaustive enumeration", recursion_exactness),
    (6, "closed-form bounds match the composed bounds", bound_recomposition),
    (7, "minimal gap exists in the condensation domain", minimal_gap_existence),
    (8, "higher beta condenses at smaller gaps", threshold_ordering),
    (9, "high-density slope and gap fixed point", high_density_asymptote),
    (10, "Van der Waals scaling lowers the gap condition", vdw_scaling),
    (11, "superstability inequality and zeta values", superstability_and_zeta),
];

pub fn check_names() -> Vec<(u32, &'static str)> {
    CHECKS.iter().map(|(id, name, _)| (*id, *name)).collect()
}

pub fn run_check(id: u32) -> Option<CheckOutcome> {
    let (id, name, check) = CHECKS.iter().find(|c| c.0 == id)?;
    let (passed, detail) = match check() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CheckOutcome { id: *id, name, passed, detail })
}

pub fn run_all() -> Vec<CheckOutcome> {
    CHECKS.iter().filter_map(|c| run_check(c.0)).collect()
}

const GRID_BETAS: [f64; 3] = [0.05, 0.1, 1.0];
const GRID_GAPS: [f64; 3] = [0.0, 0.5, 2.0];
const GRID_OFFSETS: [f64; 7] = [-2.0, -0.5, -0.01, 0.0, 0.01, 0.5, 2.0];

/// `(β, model, μ)` points around each threshold, `ν = 3`, `λ = 1`.
fn threshold_grid() -> Result<Vec<(f64, MeanFieldModel, f64, bool)>> {
    let mut out = Vec::new();
    for beta in GRID_BETAS {
        for delta in GRID_GAPS {
            let m = MeanFieldModel::new(3, delta, 1.0)?;
            let star = m.threshold(beta)?;
            for off in GRID_OFFSETS {
                out.push((beta, m, star + off, off == 0.0));
            }
        }
    }
    Ok(out)
}

fn legendre_agreement() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (beta, m, mu, _) in threshold_grid()? {
        let closed = m.thermo(beta, mu)?.pressure;
        let critical = gapped_critical_density(3, beta, m.delta)?;
        let rho_max = 2.0 * ((mu.abs() + m.delta) / m.lambda).max(critical) + 1.0;
        let (numeric, _) = m.legendre_pressure(beta, mu, rho_max)?;
        worst = worst.max((numeric - closed).abs() / closed.abs());
    }
    Ok((worst <= 1e-6, format!("max relative gap {worst:.3e} over 63 points (tolerance 1e-6)")))
}

/// First derivative at `x` from a stencil lying on the branch reported at
/// `x`: central if it fits, otherwise second-order one-sided. When no stencil
/// of the nominal step fits (a kink closer than one step on both sides) the
/// step is halved. Returns the derivative and the largest step used.
fn derivative<F>(f: F, x: f64, h: f64, lower_limit: Option<f64>) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<MeanFieldThermo>,
{
    let here = f(x)?.branch;
    let fits = |points: &[f64]| -> Result<bool> {
        for &p in points {
            if lower_limit.is_some_and(|lim| p < lim) || f(p)?.branch != here {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let p = |t: f64| Ok::<f64, crate::error::Error>(f(t)?.pressure);
    // At the edge of the domain only forward differences exist, and the
    // pressure carries a (x - edge)^{3/2} term there (the gapped critical
    // density has a square-root onset). Extrapolate forward differences at
    // h, h/4, h/16, h/64 in powers of sqrt(h).
    if lower_limit == Some(x) {
        let steps = [h, h / 4.0, h / 16.0, h / 64.0];
        if fits(&steps)? {
            let p0 = p(x)?;
            let mut table = steps.iter().map(|&s| Ok((p(x + s)? - p0) / s)).collect::<Result<Vec<f64>>>()?;
            for order in 1..table.len() {
                let factor = 2f64.powi(order as i32);
                for i in 0..table.len() - order {
                    table[i] = (factor * table[i + 1] - table[i]) / (factor - 1.0);
                }
            }
            return Ok((table[0], h));
        }
    }
    let mut step = h;
    for _ in 0..40 {
        if fits(&[x - step, x + step])? {
            return Ok(((p(x + step)? - p(x - step)?) / (2.0 * step), step));
        }
        if fits(&[x + step, x + 2.0 * step])? {
            return Ok(((-3.0 * p(x)? + 4.0 * p(x + step)? - p(x + 2.0 * step)?) / (2.0 * step), step));
        }
        if fits(&[x - step, x - 2.0 * step])? {
            return Ok(((3.0 * p(x)? - 4.0 * p(x - step)? + p(x - 2.0 * step)?) / (2.0 * step), step));
        }
        step *= 0.5;
    }
    Err(crate::error::Error::Accuracy(format!("no finite-difference stencil fits on one branch at {x}")))
}

fn derivative_identities() -> Result<(bool, String)> {
    let h = 1e-4;
    let (mut e_mu, mut e_delta, mut e_lambda) = (0.0f64, 0.0f64, 0.0f64);
    let mut reduced = 0;
    for (beta, m, mu, _) in threshold_grid()? {
        let t = m.thermo(beta, mu)?;
        let (d_mu, s1) = derivative(|x| m.thermo(beta, x), mu, h, None)?;
        let (d_delta, s2) =
            derivative(|x| MeanFieldModel::new(3, x, m.lambda)?.thermo(beta, mu), m.delta, h, Some(0.0))?;
        let (d_lambda, s3) = derivative(|x| MeanFieldModel::new(3, m.delta, x)?.thermo(beta, mu), m.lambda, h, None)?;
        reduced += [s1, s2, s3].iter().filter(|&&s| s < h).count();
        e_mu = e_mu.max((d_mu - t.total_density).abs());
        e_delta = e_delta.max((d_delta - t.condensate_density).abs());
        e_lambda = e_lambda.max((-2.0 * d_lambda - t.n2_over_v2).abs());
    }
    let worst = e_mu.max(e_delta).max(e_lambda);
    Ok((
        worst <= 1e-5,
        format!(
            "max abs errors: d/dmu {e_mu:.2e}, d/ddelta {e_delta:.2e}, -2 d/dlambda {e_lambda:.2e} (tolerance 1e-5); \
             step 1e-4, {reduced} of 189 derivatives needed a smaller step to stay on one branch"
        ),
    ))
}

fn branch_continuity() -> Result<(bool, String)> {
    let (mut e_p, mut e_rho, mut e_cond) = (0.0f64, 0.0f64, 0.0f64);
    let mut below_zero = true;
    for beta in GRID_BETAS {
        for delta in GRID_GAPS {
            let m = MeanFieldModel::new(3, delta, 1.0)?;
            let star = m.threshold(beta)?;
            let at = m.thermo(beta, star)?;
            let left = m.thermo(beta, star - 1e-12 * (1.0 + star.abs()))?;
            below_zero &= left.branch == Branch::BelowThreshold && left.condensate_density == 0.0;
            let right = m.thermo(beta, star + 1e-10 * (1.0 + star.abs()))?;
            e_p = e_p.max((left.pressure - at.pressure).abs());
            e_rho = e_rho.max((left.total_density - at.total_density).abs());
            e_cond = e_cond.max(at.condensate_density).max(right.condensate_density);
        }
    }
    let passed = e_p <= 1e-9 && e_rho <= 1e-9 && e_cond <= 1e-9 && below_zero;
    Ok((
        passed,
        format!(
            "jumps: pressure {e_p:.2e}, density {e_rho:.2e}; condensate at/just above threshold {e_cond:.2e}; \
             exactly zero below: {below_zero}"
        ),
    ))
}

fn finite_volume_convergence() -> Result<(bool, String)> {
    let base = FiniteVolumeModel::new(4.0, 3, 1.0, 1.0, 1.0, 0.5);
    let report = convergence_report(&base, &[4.0, 6.0, 8.0, 10.0])?;
    let last = report.rows.last().expect("four rows");
    if let Some(e) = &last.error {
        return Ok((false, format!("largest box failed: {e}")));
    }
    let p_rel = last.pressure_gap.unwrap_or(f64::INFINITY) / last.mf_pressure.abs();
    let c_rel = last.condensate_gap.unwrap_or(f64::INFINITY) / last.mf_condensate_density.abs();
    let gaps: Vec<String> = report
        .rows
        .iter()
        .map(|r| r.pressure_gap.map_or("failed".to_string(), |g| format!("{g:.3e}")))
        .collect();
    let passed = report.pressure_gap_monotone && p_rel <= 0.05 && c_rel <= 0.10;
    Ok((
        passed,
        format!(
            "pressure gaps along L = 4,6,8,10: [{}] (monotone: {}); at L = 10 relative pressure gap {p_rel:.3e}, \
             condensate gap {c_rel:.3e}",
            gaps.join(", "),
            report.pressure_gap_monotone
        ),
    ))
}

fn recursion_exactness() -> Result<(bool, String)> {
    let mut cases: Vec<(Vec<Level>, f64, f64, f64, f64, usize)> = vec![
        (mode_energies(2.0 * std::f64::consts::PI, 1, 1.5, 0.7)?, 1.0, 0.2, 0.5, 2.0, 12),
        (vec![Level { energy: -1.0, multiplicity: 1 }], 0.8, 0.3, 1.0, 1.5, 12),
    ];
    cases.push((
        vec![
            Level { energy: -0.3, multiplicity: 1 },
            Level { energy: 0.2, multiplicity: 2 },
            Level { energy: 0.9, multiplicity: 3 },
        ],
        2.0,
        -0.1,
        0.25,
        4.0,
        10,
    ));
    let mut worst = 0.0f64;
    for (levels, beta, mu, lambda, volume, n_max) in &cases {
        let a = grand_sums(levels, *beta, *mu, *lambda, *volume, *n_max)?;
        let b = enumerate_grand(levels, *beta, *mu, *lambda, *volume, *n_max)?;
        for (x, y) in [
            (a.log_xi.exp(), b.log_xi.exp()),
            (a.total_density, b.total_density),
            (a.condensate_density, b.condensate_density),
        ] {
            worst = worst.max((x - y).abs() / y.abs());
        }
    }
    Ok((worst <= 1e-12, format!("max relative difference {worst:.2e} over {} mode sets (tolerance 1e-12)", cases.len())))
}

fn bound_recomposition() -> Result<(bool, String)> {
    let potentials = [PairPotential::gaussian(1.0, 1.0, 3)?, PairPotential::exponential(0.5, 1.5, 3)?];
    let interactions: Vec<Vec<Interaction>> = potentials
        .iter()
        .map(|p| [0.3, 1.0, 2.5].iter().map(|&g| Interaction::new(p.clone(), g)).collect())
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let row = &interactions[rng.gen_range(0..interactions.len())];
        let i = &row[rng.gen_range(0..row.len())];
        let beta = 10f64.powf(rng.gen_range(-1.5..1.0));
        let delta = 10f64.powf(rng.gen_range(-1.0..1.5));
        let mu = i.validity_border(beta, 0.0)? * rng.gen_range(1.05..4.0) + rng.gen_range(0.0..1.0);
        let rho_ref = rng.gen_range(0.0..5.0);
        let m = i.with_gap(delta)?;
        let pairs = [
            (bound_lba(&m, beta, mu)?.value, bound_general(&m, beta, mu, 0.0, BoundMode::Lba, None)?.value),
            (bound_lb(&m, beta, mu, rho_ref)?.value, bound_general(&m, beta, mu, 0.0, BoundMode::Lb, Some(rho_ref))?.value),
        ];
        for (closed, composed) in pairs {
            worst = worst.max((closed - composed).abs() / closed.abs().max(1.0));
        }
    }
    Ok((worst <= 1e-10, format!("max difference {worst:.2e} (relative above 1) over 100 random points (tolerance 1e-10)")))
}

fn reference_interaction() -> Result<Interaction> {
    Interaction::new(PairPotential::gaussian(1.0, 1.0, 3)?, 1.0)
}

fn minimal_gap_existence() -> Result<(bool, String)> {
    let i = reference_interaction()?;
    let mut worst_residual = 0.0f64;
    let mut worst_sample = f64::INFINITY;
    let mut missing = 0;
    for beta in [0.05, 0.1] {
        let border = i.validity_border(beta, 0.0)?;
        for k in 0..10 {
            let mu = border * (1.6 + 0.4 * k as f64);
            let Some(d) = delta_min(&i, beta, mu, 0.0, BoundMode::Lba, 0.0, None)?.delta() else {
                missing += 1;
                continue;
            };
            worst_residual = worst_residual.max(bound_lba(&i.with_gap(d)?, beta, mu)?.value.abs());
            for s in 0..20 {
                let delta = d * (1.0 + 9.0 * s as f64 / 19.0);
                worst_sample = worst_sample.min(bound_lba(&i.with_gap(delta)?, beta, mu)?.value);
            }
        }
    }
    let passed = missing == 0 && worst_residual <= 1e-8 && worst_sample >= -1e-8;
    Ok((
        passed,
        format!(
            "20 points: {missing} without a minimal gap; max |bound(delta_min)| {worst_residual:.2e}; \
             min bound on [delta_min, 10 delta_min] {worst_sample:.3e}"
        ),
    ))
}

/// Shared `μ` grid for the two temperatures, above both condensation borders.
pub const ORDERING_MU_GRID: [f64; 8] = [130.0, 160.0, 200.0, 240.0, 280.0, 320.0, 360.0, 400.0];

fn threshold_ordering() -> Result<(bool, String)> {
    let i = reference_interaction()?;
    let curve = |beta: f64| {
        let params = PhaseCurveParams {
            interaction: i.clone(),
            axis: Axis::MuDelta { beta },
            eta: 0.0,
            mode: BoundMode::Lba,
            delta0: 0.0,
            rho_ref: None,
        };
        phase_curve(&params, &ORDERING_MU_GRID)
    };
    let (hot, cold) = (curve(0.05)?, curve(0.1)?);
    let mut ordered = true;
    let mut resolved = true;
    for (h, c) in hot.points.iter().zip(&cold.points) {
        match (h.threshold, c.threshold) {
            (Some(dh), Some(dc)) => ordered &= dc <= dh,
            _ => resolved = false,
        }
    }
    let first = (hot.points[0].threshold, cold.points[0].threshold);
    Ok((
        ordered && resolved,
        format!(
            "all resolved: {resolved}; beta=0.1 at-or-below beta=0.05 on mu in [130, 400]: {ordered} \
             (at mu = 130: {:?} vs {:?})",
            first.1, first.0
        ),
    ))
}

fn high_density_asymptote() -> Result<(bool, String)> {
    let i = reference_interaction()?;
    let (beta, delta) = (10.0, 10.0);
    let slope = high_density_slope(&i, beta, delta)?;
    let m = i.with_gap(delta)?;
    let mut worst = 0.0f64;
    for mu in [1e3, 1e4, 1e5] {
        let ratio = bound_lba(&m, beta, mu)?.value / mu;
        worst = worst.max((ratio - slope).abs() / slope.abs());
    }
    let cond = high_density_gap_condition(3, beta, i.coupling(), i.potential())?;
    let rhs = i.coupling() * (0.5 * i.v0() + i.vhat0() * gapped_critical_density(3, beta, cond.delta_star)?);
    let residual = (cond.delta_star - rhs).abs();
    Ok((
        worst <= 1e-3 && residual <= 1e-9,
        format!(
            "slope {slope:.6e}: max relative deviation {worst:.2e} (tolerance 1e-3); \
             gap fixed point {:.9} residual {residual:.2e} (tolerance 1e-9)",
            cond.delta_star
        ),
    ))
}

fn vdw_scaling() -> Result<(bool, String)> {
    let base = PairPotential::gaussian(1.0, 1.0, 3)?;
    let scales = [1.0, 0.5, 0.25, 0.1];
    let mut stars = Vec::new();
    for s in scales {
        stars.push(high_density_gap_condition(3, 10.0, 1.0, &base.vdw_scale(s)?)?.delta_star);
    }
    let monotone = stars.windows(2).all(|w| w[1] <= w[0]);
    let target = 1.0;
    let mut found = None;
    'search: for s in scales {
        for beta in [0.1, 1.0, 10.0, 100.0] {
            let d = high_density_gap_condition(3, beta, 1.0, &base.vdw_scale(s)?)?.delta_star;
            if d < target {
                found = Some((s, beta, d));
                break 'search;
            }
        }
    }
    let stars: Vec<String> = stars.iter().map(|d| format!("{d:.6}")).collect();
    Ok((
        monotone && found.is_some(),
        format!(
            "gap condition at beta = 10 for scales 1, 0.5, 0.25, 0.1: [{}] (nonincreasing: {monotone}); \
             first (scale, beta) below gap {target}: {found:?}",
            stars.join(", ")
        ),
    ))
}

fn superstability_and_zeta() -> Result<(bool, String)> {
    let v = PairPotential::gaussian(1.0, 1.0, 3)?;
    let constants = SuperstabilityConstants::new(&v, 0.1)?;
    let side = 2.0 * constants.min_side;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.gen_range(2..=50);
        let points: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.gen_range(0.0..side)).collect()).collect();
        let c = constants.check(&v, &points, side)?;
        if !c.holds {
            failures += 1;
        }
        min_margin = min_margin.min(c.lhs - c.rhs);
    }
    // ζ(3/2), ζ(5/2)
    let zeta = [(1.5, 2.612_375_348_685_488_3), (2.5, 1.341_487_257_250_917_2)];
    let zeta_err = zeta
        .iter()
        .map(|(s, z)| polylog(*s, 1.0).map(|p| (p - z).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    Ok((
        failures == 0 && zeta_err <= 1e-10,
        format!(
            "1000 configurations in a box of side {side:.4}: {failures} violations (min lhs - rhs {min_margin:.3e}); \
             max |Li_s(1) - zeta(s)| {zeta_err:.2e}"
        ),
    ))
}
