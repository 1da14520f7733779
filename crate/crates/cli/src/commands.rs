use becgap::bounds::{
    bound_general, bound_lb, bound_lba, delta_min, phase_curve, Axis, BoundMode, BoundReport, DeltaMin, Interaction,
    PhaseCurveParams, PhasePoint,
};
use becgap::finite_volume::{convergence_report, FiniteVolumeModel};
use becgap::meanfield::{Branch, MeanFieldModel};
use becgap::perfect::{perfect_point, ThermoState};
use becgap::potentials::{PairPotential, SuperstabilityConstants};
use becgap::selftest;

use crate::config::RunConfig;
use crate::output::{Cell, Table};
use crate::CliError;

pub struct Outcome {
    pub table: Table,
    /// Diagnostic for a computational "not found" (exit code 1); the table is
    /// still written.
    pub not_found: Option<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Self { table, not_found: None }
    }
}

pub struct CommandSpec {
    pub name: &'static str,
    pub uses: &'static [&'static str],
    pub defaults: &'static [(&'static str, &'static str)],
    pub run: fn(&RunConfig) -> Result<Outcome, CliError>,
}

pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec { name: "perfect", uses: &["nu", "beta", "mu"], defaults: &[("nu", "3")], run: perfect },
    CommandSpec {
        name: "meanfield",
        uses: &["nu", "beta", "mu", "delta", "lambda"],
        defaults: &[("nu", "3")],
        run: meanfield,
    },
    CommandSpec {
        name: "potential",
        uses: &["potential", "nu", "scale", "epsilon"],
        defaults: &[("nu", "3"), ("scale", "1"), ("epsilon", "0.5")],
        run: potential,
    },
    CommandSpec {
        name: "bound-lb",
        uses: &["potential", "nu", "g", "scale", "beta", "mu", "delta", "rho-ref"],
        defaults: &[("nu", "3"), ("scale", "1")],
        run: bound_lb_cmd,
    },
    CommandSpec {
        name: "bound-lba",
        uses: &["potential", "nu", "g", "scale", "beta", "mu", "delta"],
        defaults: &[("nu", "3"), ("scale", "1")],
        run: bound_lba_cmd,
    },
    CommandSpec {
        name: "bound-general",
        uses: &[
            "potential", "nu", "g", "scale", "beta", "mu", "delta", "delta0",
            "mode", "rho-ref",
        ],
        defaults: &[("nu", "3"), ("scale", "1"), ("mode", "lba"), ("delta0", "0")],
        run: bound_general_cmd,
    },
    CommandSpec {
        name: "delta-min",
        uses: &[
            "potential", "nu", "g", "scale", "beta", "mu", "eta", "delta0",
            "mode", "rho-ref",
        ],
        defaults: &[("nu", "3"), ("scale", "1"), ("mode", "lba"), ("eta", "0"), ("delta0", "0")],
        run: delta_min_cmd,
    },
    CommandSpec {
        name: "phase-curve",
        uses: &[
            "potential", "nu", "g", "scale", "axis", "beta", "mu", "delta",
            "eta", "delta0", "mode", "rho-ref",
        ],
        defaults: &[("nu", "3"), ("scale", "1"), ("mode", "lba"), ("eta", "0"), ("delta0", "0"), ("axis", "mu-delta")],
        run: phase_curve_cmd,
    },
    CommandSpec {
        name: "oracle",
        uses: &["nu", "side", "delta", "lambda", "beta", "mu", "k-cut", "n-max"],
        defaults: &[("nu", "3")],
        run: oracle,
    },
    CommandSpec { name: "selftest", uses: &["check"], defaults: &[], run: selftest_cmd },
];

fn nu(cfg: &RunConfig) -> Result<u32, CliError> {
    let n = cfg.integer("nu")?;
    u32::try_from(n).ok().filter(|n| *n >= 1).ok_or_else(|| CliError::Usage(format!("--nu must be >= 1, got {n}")))
}

fn interaction(cfg: &RunConfig) -> Result<Interaction, CliError> {
    let mut v = PairPotential::from_spec(cfg.string("potential")?, nu(cfg)?)?;
    let scale = cfg.number("scale")?;
    if scale != 1.0 {
        v = v.vdw_scale(scale)?;
    }
    Ok(Interaction::new(v, cfg.number("g")?)?)
}

fn mode(cfg: &RunConfig) -> Result<BoundMode, CliError> {
    Ok(cfg.string("mode")?.parse()?)
}

/// Reference density for LB: a number, or `surrogate` for the gapless
/// mean-field density at the same `(β, μ)`.
fn rho_ref(cfg: &RunConfig, interaction: &Interaction, beta: f64, mu: f64) -> Result<f64, CliError> {
    let raw = cfg.string("rho-ref")?;
    if raw.eq_ignore_ascii_case("surrogate") {
        Ok(interaction.surrogate_reference_density(beta, mu)?)
    } else {
        let r: f64 = raw
            .parse()
            .map_err(|_| CliError::Usage(format!("--rho-ref: expected a number or `surrogate`, got `{raw}`")))?;
        Ok(r)
    }
}

fn perfect(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let nu = nu(cfg)?;
    let mut t = Table::new(&["beta", "mu", "pressure", "density"]);
    for beta in cfg.grid("beta")? {
        for mu in cfg.grid("mu")? {
            let p = perfect_point(&ThermoState::new(nu, beta, mu)?)?;
            t.push(vec![beta.into(), mu.into(), p.pressure.into(), p.density.into()]);
        }
    }
    Ok(t.into())
}

fn meanfield(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let nu = nu(cfg)?;
    let lambda = cfg.number("lambda")?;
    let mut t = Table::new(&[
        "beta", "delta", "mu", "threshold", "pressure", "total_density", "condensate_density", "n2_over_v2", "branch",
    ]);
    for beta in cfg.grid("beta")? {
        for delta in cfg.grid("delta")? {
            let m = MeanFieldModel::new(nu, delta, lambda)?;
            let star = m.threshold(beta)?;
            for mu in cfg.grid("mu")? {
                let s = m.thermo(beta, mu)?;
                let branch = match s.branch {
                    Branch::BelowThreshold => "BELOW_THRESHOLD",
                    Branch::AboveThreshold => "ABOVE_THRESHOLD",
                };
                t.push(vec![
                    beta.into(),
                    delta.into(),
                    mu.into(),
                    star.into(),
                    s.pressure.into(),
                    s.total_density.into(),
                    s.condensate_density.into(),
                    s.n2_over_v2.into(),
                    branch.into(),
                ]);
            }
        }
    }
    Ok(t.into())
}

fn potential(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut v = PairPotential::from_spec(cfg.string("potential")?, nu(cfg)?)?;
    let scale = cfg.number("scale")?;
    if scale != 1.0 {
        v = v.vdw_scale(scale)?;
    }
    v.certify()?;
    let c = v.characterize()?;
    let s = SuperstabilityConstants::new(&v, cfg.number("epsilon")?)?;
    let mut t = Table::new(&["quantity", "value"]);
    for (name, value) in [
        ("v0", c.v0),
        ("vhat0", c.vhat0),
        ("l1_norm", c.l1_norm),
        ("superstability_quadratic", s.quadratic),
        ("superstability_linear", s.linear),
        ("cutoff_radius", s.cutoff_radius),
        ("min_side", s.min_side),
    ] {
        t.push(vec![name.into(), value.into()]);
    }
    t.notes.push("positive type certified on q = 0, 0.1, ..., 10".into());
    Ok(t.into())
}

fn bound_table<F>(cfg: &RunConfig, eval: F) -> Result<Outcome, CliError>
where
    F: Fn(&Interaction, f64, f64, f64) -> Result<BoundReport, CliError>,
{
    let interaction = interaction(cfg)?;
    let mut t = Table::default();
    for beta in cfg.grid("beta")? {
        for mu in cfg.grid("mu")? {
            for delta in cfg.grid("delta")? {
                let r = eval(&interaction, beta, mu, delta)?;
                if t.columns.is_empty() {
                    t.columns = vec!["beta", "mu", "delta", "bound", "valid", "validity_border", "rho_ref"];
                    t.columns.extend(r.terms.iter().map(|term| term.name));
                }
                let mut row: Vec<Cell> = vec![
                    beta.into(),
                    mu.into(),
                    delta.into(),
                    r.value.into(),
                    r.valid.into(),
                    r.validity_border.into(),
                    r.rho_ref.into(),
                ];
                row.extend(r.terms.iter().map(|term| Cell::from(term.value)));
                t.push(row);
            }
        }
    }
    Ok(t.into())
}

fn bound_lb_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    bound_table(cfg, |i, beta, mu, delta| {
        let r = rho_ref(cfg, i, beta, mu)?;
        Ok(bound_lb(&i.with_gap(delta)?, beta, mu, r)?)
    })
}

fn bound_lba_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    bound_table(cfg, |i, beta, mu, delta| Ok(bound_lba(&i.with_gap(delta)?, beta, mu)?))
}

fn bound_general_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mode = mode(cfg)?;
    let delta0 = cfg.number("delta0")?;
    bound_table(cfg, |i, beta, mu, delta| {
        let r = if mode == BoundMode::Lb { Some(rho_ref(cfg, i, beta, mu)?) } else { None };
        Ok(bound_general(&i.with_gap(delta)?, beta, mu, delta0, mode, r)?)
    })
}

fn delta_min_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let interaction = interaction(cfg)?;
    let (mode, eta, delta0) = (mode(cfg)?, cfg.number("eta")?, cfg.number("delta0")?);
    let mut t = Table::new(&["beta", "mu", "delta_min", "bound", "found"]);
    let mut reasons: Vec<String> = Vec::new();
    for beta in cfg.grid("beta")? {
        for mu in cfg.grid("mu")? {
            let r = if mode == BoundMode::Lb { Some(rho_ref(cfg, &interaction, beta, mu)?) } else { None };
            match delta_min(&interaction, beta, mu, eta, mode, delta0, r)? {
                DeltaMin::Found { delta, bound } => {
                    t.push(vec![beta.into(), mu.into(), delta.into(), bound.into(), true.into()]);
                }
                DeltaMin::NotFound { reason } => {
                    t.push(vec![beta.into(), mu.into(), Cell::Missing, Cell::Missing, false.into()]);
                    reasons.push(format!("beta = {beta}, mu = {mu}: {reason}"));
                }
            }
        }
    }
    let not_found = (!reasons.is_empty()).then(|| format!("no minimal gap at {} point(s):\n{}", reasons.len(), reasons.join("\n")));
    Ok(Outcome { table: t, not_found })
}

fn phase_curve_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let interaction = interaction(cfg)?;
    let (mode, eta, delta0) = (mode(cfg)?, cfg.number("eta")?, cfg.number("delta0")?);
    let axis = cfg.string("axis")?;
    let (params_key, grid_key) = match axis {
        "mu-delta" => ("beta", "mu"),
        "mu-beta" => ("delta", "beta"),
        other => return Err(CliError::Usage(format!("--axis: expected mu-delta or mu-beta, got `{other}`"))),
    };
    let surrogate = mode == BoundMode::Lb && cfg.string("rho-ref")?.eq_ignore_ascii_case("surrogate");
    if surrogate && axis == "mu-beta" {
        return Err(CliError::Usage(
            "--rho-ref surrogate needs a fixed mu; give a number for the mu-beta axis".into(),
        ));
    }
    let grid = cfg.grid(grid_key)?;
    let mut t = Table::new(&["curve_param", "abscissa", "threshold", "bound_residual", "validity_border", "resolved_flag"]);
    let mut unresolved = Vec::new();
    for param in cfg.grid(params_key)? {
        let axis = if axis == "mu-delta" { Axis::MuDelta { beta: param } } else { Axis::MuBeta { delta: param } };
        let mut params = PhaseCurveParams { interaction: interaction.clone(), axis, eta, mode, delta0, rho_ref: None };
        let points: Vec<PhasePoint> = if surrogate {
            // The reference density depends on μ, so each point gets its own.
            let mut pts = Vec::with_capacity(grid.len());
            for &mu in &grid {
                params.rho_ref = Some(interaction.surrogate_reference_density(param, mu)?);
                pts.extend(phase_curve(&params, &[mu])?.points);
            }
            pts
        } else {
            if mode == BoundMode::Lb {
                params.rho_ref = Some(cfg.number("rho-ref")?);
            }
            phase_curve(&params, &grid)?.points
        };
        for p in points {
            if !p.resolved {
                unresolved.push(format!(
                    "{params_key} = {param}, {grid_key} = {}: {}",
                    p.abscissa,
                    p.note.as_deref().unwrap_or("unresolved")
                ));
            }
            t.push(vec![
                param.into(),
                p.abscissa.into(),
                p.threshold.into(),
                p.bound_residual.into(),
                p.validity_border.into(),
                p.resolved.into(),
            ]);
        }
    }
    t.notes.push(format!("curve_param = {params_key}, abscissa = {grid_key}"));
    let not_found =
        (!unresolved.is_empty()).then(|| format!("{} unresolved point(s):\n{}", unresolved.len(), unresolved.join("\n")));
    Ok(Outcome { table: t, not_found })
}

fn oracle(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut base = FiniteVolumeModel::new(
        1.0,
        nu(cfg)?,
        cfg.number("delta")?,
        cfg.number("lambda")?,
        cfg.number("beta")?,
        cfg.number("mu")?,
    );
    base.k_cut = cfg.optional_number("k-cut")?;
    if cfg.has("n-max") {
        base.n_max = Some(cfg.integer("n-max")? as usize);
    }
    let report = convergence_report(&base, &cfg.grid("side")?)?;
    let mut t = Table::new(&[
        "side",
        "fv_pressure",
        "fv_total_density",
        "fv_condensate_density",
        "mf_pressure",
        "mf_total_density",
        "mf_condensate_density",
        "pressure_gap",
        "total_density_gap",
        "condensate_gap",
        "error",
    ]);
    for r in &report.rows {
        t.push(vec![
            r.side.into(),
            r.fv_pressure.into(),
            r.fv_total_density.into(),
            r.fv_condensate_density.into(),
            r.mf_pressure.into(),
            r.mf_total_density.into(),
            r.mf_condensate_density.into(),
            r.pressure_gap.into(),
            r.total_density_gap.into(),
            r.condensate_gap.into(),
            r.error.clone().map_or(Cell::Missing, Cell::Text),
        ]);
    }
    t.notes.push(format!("pressure gaps monotone in side: {}", report.pressure_gap_monotone));
    Ok(t.into())
}

fn selftest_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let outcomes = if cfg.has("check") {
        let mut out = Vec::new();
        for raw in cfg.grid("check")? {
            let id = raw as u32;
            let o = selftest::run_check(id)
                .filter(|_| raw == id as f64)
                .ok_or_else(|| CliError::Usage(format!("--check: no check with id {raw}")))?;
            out.push(o);
        }
        out
    } else {
        selftest::run_all()
    };
    let mut t = Table::new(&["id", "name", "passed", "detail"]);
    let mut failed = Vec::new();
    for o in outcomes {
        eprintln!("[{}] {:>2} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.name, o.detail);
        if !o.passed {
            failed.push(o.id.to_string());
        }
        t.push(vec![Cell::Int(o.id.into()), o.name.into(), o.passed.into(), o.detail.into()]);
    }
    let not_found = (!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", ")));
    Ok(Outcome { table: t, not_found })
}
