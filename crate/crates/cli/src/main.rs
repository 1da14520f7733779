//! `becgap`: grids, bounds and threshold curves for gapped Bose gases,
//! written as CSV or JSON.
//!
//! Exit codes: 0 success, 1 computational "not found" (no minimal gap,
//! unresolved curve points, failed self-checks) or numerical failure,
//! 2 usage error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::COMMANDS;
use crate::config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(becgap::Error),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<becgap::Error> for CliError {
    fn from(e: becgap::Error) -> Self {
        use becgap::Error::*;
        match e {
            // Rejected input rather than failed computation.
            Domain(_) | Parse(_) | MissingParameter(_) | NotPositiveType(_) | Integrability(_) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Compute(e),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "becgap", version, about = "Thermodynamics and condensate bounds for gapped Bose gases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Parameters shared by every command. Each flag is also a config-file key;
/// list-valued keys take comma lists, repeated flags, or `start:stop:step`.
#[derive(Args, Debug)]
struct Params {
    /// Config file of `key = value` lines; flags override its entries.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Spatial dimension.
    #[arg(long, allow_hyphen_values = true)]
    nu: Vec<String>,
    /// Inverse temperature (list).
    #[arg(long, allow_hyphen_values = true)]
    beta: Vec<String>,
    /// Chemical potential (list).
    #[arg(long, allow_hyphen_values = true)]
    mu: Vec<String>,
    /// Gap of the zero mode (list).
    #[arg(long, allow_hyphen_values = true)]
    delta: Vec<String>,
    /// Gap of the reference system for the composed bound.
    #[arg(long, allow_hyphen_values = true)]
    delta0: Vec<String>,
    /// Mean-field coupling.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Vec<String>,
    /// Coupling constant in front of the pair potential.
    #[arg(long, allow_hyphen_values = true)]
    g: Vec<String>,
    /// `gaussian:a=..,sigma=..`, `exponential:a=..,m=..` or `table:PATH`.
    #[arg(long)]
    potential: Vec<String>,
    /// Van der Waals scale factor of the potential.
    #[arg(long, allow_hyphen_values = true)]
    scale: Vec<String>,
    /// Superstability slack in (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Vec<String>,
    /// Target value of the condensate bound.
    #[arg(long, allow_hyphen_values = true)]
    eta: Vec<String>,
    /// Bound variant: lb or lba.
    #[arg(long)]
    mode: Vec<String>,
    /// Reference density for lb: a number or `surrogate`.
    #[arg(long, allow_hyphen_values = true)]
    rho_ref: Vec<String>,
    /// Phase-curve axis: mu-delta or mu-beta.
    #[arg(long)]
    axis: Vec<String>,
    /// Box sides for the finite-volume oracle (list).
    #[arg(long, allow_hyphen_values = true)]
    side: Vec<String>,
    /// Mode energy cutoff for the oracle.
    #[arg(long, allow_hyphen_values = true)]
    k_cut: Vec<String>,
    /// Particle-number truncation for the oracle.
    #[arg(long, allow_hyphen_values = true)]
    n_max: Vec<String>,
    /// Self-check ids to run (list); default all.
    #[arg(long)]
    check: Vec<String>,
    /// Output file; default stdout.
    #[arg(long, short)]
    output: Vec<String>,
    /// csv or json.
    #[arg(long)]
    format: Vec<String>,
}

impl Params {
    fn into_flags(self) -> (Option<PathBuf>, Vec<(&'static str, String)>) {
        let lists: [(&'static str, Vec<String>); 20] = [
            ("nu", self.nu),
            ("beta", self.beta),
            ("mu", self.mu),
            ("delta", self.delta),
            ("delta0", self.delta0),
            ("lambda", self.lambda),
            ("g", self.g),
            ("potential", self.potential),
            ("scale", self.scale),
            ("epsilon", self.epsilon),
            ("eta", self.eta),
            ("mode", self.mode),
            ("rho-ref", self.rho_ref),
            ("axis", self.axis),
            ("side", self.side),
            ("k-cut", self.k_cut),
            ("n-max", self.n_max),
            ("check", self.check),
            ("output", self.output),
            ("format", self.format),
        ];
        let flags = lists.into_iter().flat_map(|(k, vs)| vs.into_iter().map(move |v| (k, v))).collect();
        (self.config, flags)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Perfect-gas pressure and density on a (beta, mu) grid.
    Perfect(Params),
    /// Mean-field pressure, densities and branch on a (beta, delta, mu) grid.
    Meanfield(Params),
    /// v(0), integral, L1 norm and superstability constants of a potential.
    Potential(Params),
    /// Closed-form condensate bound with an external reference density.
    BoundLb(Params),
    /// Closed-form condensate bound from explicit quantities.
    BoundLba(Params),
    /// Condensate bound composed with a gapped reference system.
    BoundGeneral(Params),
    /// Smallest gap at which the bound reaches eta.
    DeltaMin(Params),
    /// Threshold curves on the (mu, delta) or (mu, beta) plane.
    PhaseCurve(Params),
    /// Finite-volume model against the mean-field closed forms.
    Oracle(Params),
    /// Built-in consistency checks.
    Selftest(Params),
}

impl Command {
    fn split(self) -> (&'static str, Params) {
        match self {
            Command::Perfect(p) => ("perfect", p),
            Command::Meanfield(p) => ("meanfield", p),
            Command::Potential(p) => ("potential", p),
            Command::BoundLb(p) => ("bound-lb", p),
            Command::BoundLba(p) => ("bound-lba", p),
            Command::BoundGeneral(p) => ("bound-general", p),
            Command::DeltaMin(p) => ("delta-min", p),
            Command::PhaseCurve(p) => ("phase-curve", p),
            Command::Oracle(p) => ("oracle", p),
            Command::Selftest(p) => ("selftest", p),
        }
    }
}

fn run(cli: Cli) -> Result<Option<String>, CliError> {
    let (name, params) = cli.command.split();
    let spec = COMMANDS.iter().find(|c| c.name == name).expect("every subcommand has a spec");
    let (config_file, flags) = params.into_flags();
    for (key, _) in &flags {
        if !spec.uses.contains(key) && *key != "output" && *key != "format" {
            eprintln!("becgap: --{key} is not used by `{name}`");
        }
    }
    let cfg = RunConfig::resolve(spec.name, flags, config_file.as_deref(), spec.defaults)?;
    let outcome = (spec.run)(&cfg)?;
    output::emit(&cfg, &outcome.table)?;
    Ok(outcome.not_found)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(diagnostic)) => {
            eprintln!("becgap: {diagnostic}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("becgap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
