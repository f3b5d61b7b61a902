//! Command-line front end for `bdl-core`.
//!
//! Every subcommand resolves its flags over an optional `--config` JSON file
//! into a [`RunConfig`], runs, and prints a [`ResultRecord`] as JSON. Exit
//! codes: 0 success, 1 failed acceptance criteria (`reproduce`), 2 invalid
//! input, 3 solver non-convergence, 64 usage error.

mod commands;
pub mod config;
pub mod record;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use bdl_core::asymptotics::Formula;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

pub use config::{ModeName, RunConfig, SweepSpec};
pub use record::ResultRecord;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITERIA_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Solver,
    CriteriaFailed,
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub class: ErrorClass,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            class: ErrorClass::Input,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Input => EXIT_INPUT,
            ErrorClass::Solver => EXIT_SOLVER,
            ErrorClass::CriteriaFailed => EXIT_CRITERIA_FAILED,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<bdl_core::Error> for CliError {
    fn from(e: bdl_core::Error) -> Self {
        let class = if e.is_convergence_failure() {
            ErrorClass::Solver
        } else {
            ErrorClass::Input
        };
        Self {
            class,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bdl", version, about = "Dilute Bose gas energy densities: scattering, Bogoliubov, asymptotics")]
struct Cli {
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "BDL_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Zero-energy scattering solution and scattering length.
    Scatter(ScatterArgs),
    /// Minimize the Bogoliubov functional at one density.
    BogMin(BogMinArgs),
    /// Bogoliubov minimization over a range of ρa³, as CSV.
    BogSweep(BogSweepArgs),
    /// Evaluate a dilute asymptotic formula.
    Asymptote(AsymptoteArgs),
    /// Healing length, transverse mode count and depletion scale.
    Estimate(EstimateArgs),
    /// Lieb–Liniger ground state.
    LiebLiniger(LiebLinigerArgs),
    /// Run the acceptance checks and print a pass/fail table.
    Reproduce(ReproduceArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Scatter(_) => "scatter",
            Command::BogMin(_) => "bog-min",
            Command::BogSweep(_) => "bog-sweep",
            Command::Asymptote(_) => "asymptote",
            Command::Estimate(_) => "estimate",
            Command::LiebLiniger(_) => "lieb-liniger",
            Command::Reproduce(_) => "reproduce",
        }
    }
}

const POTENTIAL_HELP: &str = "potential: inline JSON like '{\"kind\":\"hardcore\",\"R\":1}', a JSON file, or an (r, v) CSV file";

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ScatterArgs {
    #[arg(long, help = POTENTIAL_HELP)]
    potential: Option<String>,
    #[arg(long)]
    dim: Option<u8>,
    /// RK4 steps across the potential range.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Write (r, u) here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct BogMinArgs {
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeName>,
    /// Scattering length for the scattering-constant mode.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, help = POTENTIAL_HELP)]
    potential: Option<String>,
    #[arg(long)]
    grid_nodes: Option<usize>,
    #[arg(long)]
    cutoff: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct BogSweepArgs {
    #[arg(long, value_enum)]
    mode: Option<ModeName>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, help = POTENTIAL_HELP)]
    potential: Option<String>,
    #[arg(long)]
    grid_nodes: Option<usize>,
    #[arg(long)]
    cutoff: Option<f64>,
    /// Smallest ρa³.
    #[arg(long)]
    from: Option<f64>,
    /// Largest ρa³.
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    /// CSV destination; `-` prints the CSV instead of the JSON record.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct AsymptoteArgs {
    #[arg(long)]
    dim: Option<u8>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, value_parser = parse_formula)]
    formula: Option<Formula>,
    /// Higher-order constants {"D", "r_s", "C", "I"} as JSON or a JSON file.
    #[arg(long)]
    constants: Option<String>,
    /// Append a row to this CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct EstimateArgs {
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long = "R-trap")]
    r_trap: Option<f64>,
    #[arg(long = "L-box")]
    l_box: Option<f64>,
    /// Append a row to this CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct LiebLinigerArgs {
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// Gauss–Legendre nodes on [−1, 1].
    #[arg(long)]
    nodes: Option<usize>,
    /// Sweep γ from here (with --to and --count).
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    /// Write (x, g) or, for a sweep, (gamma, lambda, e_tilde, residual).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct ReproduceArgs {
    /// Print the full JSON record instead of the table.
    #[arg(long)]
    json: bool,
    /// Run only these criteria.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

fn parse_formula(s: &str) -> Result<Formula, String> {
    s.parse::<Formula>().map_err(|_| {
        let names: Vec<_> = Formula::ALL.iter().map(|f| f.name()).collect();
        format!("unknown formula '{s}', expected one of {}", names.join(", "))
    })
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_USAGE,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(out) => {
            print!("{out}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<String, CliError> {
    let name = cli.command.name();
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(other) = file.subcommand.as_deref().filter(|s| *s != name) {
        return Err(CliError::input(format!("config is for '{other}', not '{name}'")));
    }
    let jobs = cli.jobs;
    if jobs == Some(0) {
        return Err(CliError::input("--jobs must be at least 1"));
    }
    let with = |flags: RunConfig| -> RunConfig {
        let mut cfg = file.clone().overlay(flags);
        cfg.subcommand = Some(name.to_string());
        cfg
    };
    match cli.command {
        Command::Scatter(a) => commands::scatter(with(RunConfig {
            potential: a.potential.as_deref().map(config::parse_potential).transpose()?,
            dim: a.dim,
            grid_points: a.grid_points,
            csv: a.csv,
            ..RunConfig::default()
        })),
        Command::BogMin(a) => commands::bog_min(with(RunConfig {
            rho: a.rho,
            mode: a.mode,
            a: a.a,
            potential: a.potential.as_deref().map(config::parse_potential).transpose()?,
            grid_nodes: a.grid_nodes,
            cutoff: a.cutoff,
            ..RunConfig::default()
        })),
        Command::BogSweep(a) => {
            let mut cfg = with(RunConfig {
                mode: a.mode,
                a: a.a,
                potential: a.potential.as_deref().map(config::parse_potential).transpose()?,
                grid_nodes: a.grid_nodes,
                cutoff: a.cutoff,
                csv: a.csv,
                ..RunConfig::default()
            });
            cfg.sweep = Some(sweep_flags(cfg.sweep.take(), "rho_a3", (1e-8, 1e-5, 6), a.from, a.to, a.count));
            commands::bog_sweep(cfg, jobs)
        }
        Command::Asymptote(a) => commands::asymptote(with(RunConfig {
            dim: a.dim,
            rho: a.rho,
            a: a.a,
            formula: a.formula,
            constants: a.constants.as_deref().map(commands::parse_constants).transpose()?,
            csv: a.csv,
            ..RunConfig::default()
        })),
        Command::Estimate(a) => commands::estimate(with(RunConfig {
            rho: a.rho,
            a: a.a,
            r_trap: a.r_trap,
            l_box: a.l_box,
            csv: a.csv,
            ..RunConfig::default()
        })),
        Command::LiebLiniger(a) => {
            let mut cfg = with(RunConfig {
                gamma: a.gamma,
                rho: a.rho,
                c: a.c,
                nodes: a.nodes,
                csv: a.csv,
                ..RunConfig::default()
            });
            if a.from.is_some() || a.to.is_some() || a.count.is_some() {
                cfg.sweep = Some(sweep_flags(cfg.sweep.take(), "gamma", (1.0, 1e3, 10), a.from, a.to, a.count));
            }
            commands::lieb_liniger(cfg, jobs)
        }
        Command::Reproduce(a) => commands::reproduce(with(RunConfig::default()), a.json, &a.only),
    }
}

fn sweep_flags(
    base: Option<SweepSpec>,
    parameter: &str,
    default: (f64, f64, usize),
    from: Option<f64>,
    to: Option<f64>,
    count: Option<usize>,
) -> SweepSpec {
    let base = base.unwrap_or(SweepSpec {
        parameter: parameter.to_string(),
        min: default.0,
        max: default.1,
        count: default.2,
    });
    SweepSpec {
        min: from.unwrap_or(base.min),
        max: to.unwrap_or(base.max),
        count: count.unwrap_or(base.count),
        parameter: base.parameter,
    }
}
