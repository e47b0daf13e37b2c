//! Command-line front end: single solves, constraint sweeps and the oracle
//! validation battery.
//!
//! Exit codes: 0 success, 1 malformed flags or configuration, 2 infeasible
//! constraint, 3 I/O failure, 4 validation failure.

mod config;
mod solve;
mod sweep;
mod validate;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use leakrate::specfun::SolverConfig;

pub use config::{apply_config_file, parse_config};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

/// Default seed of the Monte-Carlo checks; `LEAKRATE_SEED` overrides it.
pub const DEFAULT_SEED: u64 = 20_240_611;
pub const SEED_ENV: &str = "LEAKRATE_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "leakrate",
    version,
    about = "Secure transmission-rate design under information-leakage constraints"
)]
pub struct Cli {
    /// key=value file whose entries fill in flags not given on the command
    /// line.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance with both the closed form and the exact baseline.
    #[command(allow_negative_numbers = true)]
    Solve(SolveArgs),
    /// Sweep the constraint and write CSV and SVG reports.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Run the oracle cross-checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Case {
    /// Maximize throughput under a leakage cap.
    Case1,
    /// Minimize leakage under a throughput floor.
    Case2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    #[arg(long, default_value_t = SolverConfig::default().abs_tol)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = SolverConfig::default().rel_tol)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = SolverConfig::default().max_iter)]
    pub max_iter: usize,
    /// Scan points of the exact baselines.
    #[arg(long, default_value_t = SolverConfig::default().grid_points)]
    pub grid_points: usize,
    #[arg(long, default_value_t = SolverConfig::default().quad_tol)]
    pub quad_tol: f64,
}

impl SolverFlags {
    pub fn to_config(&self) -> SolverConfig {
        SolverConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_iter: self.max_iter,
            grid_points: self.grid_points,
            quad_tol: self.quad_tol,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(value_enum)]
    pub case: Case,
    /// Average main-channel SNR in dB.
    #[arg(long)]
    pub gamma_b_db: f64,
    /// Average eavesdropper-channel SNR in dB.
    #[arg(long)]
    pub gamma_e_db: f64,
    /// Leakage cap (case1), bits per channel use.
    #[arg(long)]
    pub xi: Option<f64>,
    /// Throughput floor (case2), bits per channel use.
    #[arg(long)]
    pub throughput: Option<f64>,
    #[command(flatten)]
    pub solver: SolverFlags,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub case: Case,
    /// Main-channel SNRs in dB; repeat for several curves.
    #[arg(long = "gamma-b-db", default_values_t = [10.0, 13.0])]
    pub gamma_b_db: Vec<f64>,
    #[arg(long, default_value_t = 3.0)]
    pub gamma_e_db: f64,
    /// Number of constraint values.
    #[arg(long, default_value_t = leakrate::report::DEFAULT_SWEEP_POINTS)]
    pub points: usize,
    /// First constraint value as a fraction of the feasible maximum.
    #[arg(long, default_value_t = leakrate::report::DEFAULT_SWEEP_FRACTIONS.0)]
    pub lo: f64,
    /// Last constraint value as a fraction of the feasible maximum.
    #[arg(long, default_value_t = leakrate::report::DEFAULT_SWEEP_FRACTIONS.1)]
    pub hi: f64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Summary format on stdout.
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Multiplies every check tolerance; 0 makes any nonzero error fail.
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
    /// Monte-Carlo seed; falls back to LEAKRATE_SEED, then a fixed default.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Points per axis of the oracle grids.
    #[arg(long, default_value_t = 600)]
    pub oracle_grid: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// A failed command: exit code plus message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: i32, error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            error: error.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.error)
    }
}

impl From<leakrate::Error> for Failure {
    fn from(e: leakrate::Error) -> Self {
        let code = match e {
            leakrate::Error::Infeasible { .. } => EXIT_INFEASIBLE,
            leakrate::Error::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Failure::new(code, e)
    }
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code. Output goes to stdout, diagnostics to
/// stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match apply_config_file(argv) {
        Ok(a) => a,
        Err(f) => {
            eprintln!("error: {f}");
            return f.code;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => solve::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Validate(a) => validate::run(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {f}");
            f.code
        }
    }
}

pub(crate) fn resolve_seed(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::new(
                EXIT_USAGE,
                anyhow::anyhow!("{SEED_ENV} must be an unsigned integer, got {v:?}"),
            )
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
