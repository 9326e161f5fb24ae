//! `circspec`: tabulates power spectra of the circular ensembles.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod grid;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "circspec",
    version,
    about = "Power spectra of the circular ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate S_{N,β}(ω) or its N → ∞ limit on a frequency grid.
    Spectrum(SpectrumArgs),
    /// Tabulate the generating function E((0, x); ξ) on an angle or length grid.
    Genfn(GenfnArgs),
    /// Cross-check the evaluation routes against each other.
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads.
    #[arg(long, env = "CIRCSPEC_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteArg {
    Determinant,
    Recurrence,
    Fredholm,
    Painleve,
}

impl From<RouteArg> for circspec_core::Route {
    fn from(r: RouteArg) -> Self {
        use circspec_core::Route;
        match r {
            RouteArg::Determinant => Route::Determinant,
            RouteArg::Recurrence => Route::Recurrence,
            RouteArg::Fredholm => Route::Fredholm,
            RouteArg::Painleve => Route::Painleve,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiRuleArg {
    Gauss,
    UniformGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelArg {
    /// Bulk sine kernel (β = 2).
    Sine,
    /// Even part, giving E^{O+}.
    SinePlus,
    /// Odd part, giving E^{O-}.
    SineMinus,
}

#[derive(Args, Debug, Clone)]
#[command(group(clap::ArgGroup::new("size").required(true).args(["n", "limit"])))]
#[command(group(clap::ArgGroup::new("freq").required(true).args(["omega", "omega_grid"])))]
pub struct SpectrumArgs {
    /// Dyson index: 1, 2 or 4.
    #[arg(long)]
    beta: u32,
    /// Matrix size.
    #[arg(long = "N")]
    n: Option<usize>,
    /// N → ∞ limit.
    #[arg(long)]
    limit: bool,
    /// Frequency; repeat for several.
    #[arg(long, value_parser = grid::parse_angle)]
    omega: Vec<f64>,
    /// Frequency grid: step:count, start:stop:count or start:stop:step.
    #[arg(long)]
    omega_grid: Option<String>,
    #[arg(long, value_enum)]
    route: Option<RouteArg>,
    /// Cut-off target of the limiting integral.
    #[arg(long)]
    s_star: Option<f64>,
    /// Sampling step of the limiting integral.
    #[arg(long)]
    grid_spacing: Option<f64>,
    #[arg(long, value_enum)]
    phi_rule: Option<PhiRuleArg>,
    /// Record per-row wall time instead of 0.
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
#[command(group(clap::ArgGroup::new("size").required(true).args(["n", "limit"])))]
#[command(group(clap::ArgGroup::new("param").required(true).args(["omega", "xi"])))]
pub struct GenfnArgs {
    /// Dyson index: 1, 2 or 4 (default 2).
    #[arg(long, conflicts_with = "kernel")]
    beta: Option<u32>,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long)]
    limit: bool,
    /// Evaluate at ξ = 1 - e^{iω}.
    #[arg(long, value_parser = grid::parse_angle)]
    omega: Option<f64>,
    /// Evaluate at ξ = re or re,im.
    #[arg(long, value_parser = grid::parse_complex, allow_hyphen_values = true)]
    xi: Option<(f64, f64)>,
    /// Angle grid in [0, π] (finite N).
    #[arg(long, conflicts_with = "s_grid")]
    phi_grid: Option<String>,
    /// Length grid, s ≥ 0 (limit).
    #[arg(long)]
    s_grid: Option<String>,
    /// Limiting kernel instead of an ensemble.
    #[arg(long, value_enum, requires = "limit")]
    kernel: Option<KernelArg>,
    #[arg(long, value_enum)]
    route: Option<RouteArg>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct ValidateArgs {
    /// Frequency of the conjecture overlay.
    #[arg(long, value_parser = grid::parse_angle, default_value = "31pi/32")]
    omega: f64,
    #[command(flatten)]
    common: Common,
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
    Io(std::io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

fn set_threads(common: &Common) -> Result<(), Failure> {
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("cannot size the worker pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum(a) => {
            set_threads(&a.common)?;
            commands::spectrum(&a)
        }
        Command::Genfn(a) => {
            set_threads(&a.common)?;
            commands::genfn(&a)
        }
        Command::Validate(a) => {
            set_threads(&a.common)?;
            commands::validate(&a)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("circspec: {e}");
            ExitCode::from(e.code())
        }
    }
}
