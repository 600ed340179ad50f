//! The `nrw` command line: argument parsing, config merging, output and exit codes.
//!
//! Exit codes: 0 on success, 1 on a numerical failure or a failed `validate`,
//! 2 on any configuration error.

pub mod commands;
pub mod config;
pub mod table;
pub mod validate;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::gaussian::NegativityConvention;
pub use commands::{entropy_initial, esd, esd_table, sweep, time_series};
pub use config::{ConfigError, RunConfig, Scenario, Settings};
pub use table::{Cell, Table};
pub use validate::{validate, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "nrw", version, about = "Gaussian-state dynamics of damped particle pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time series for one configuration.
    Run(ParamArgs),
    /// One time series per value of a parameter, in long format.
    Sweep {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        vary: VaryArgs,
    },
    /// Entanglement sudden-death time.
    Esd {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        vary: VaryArgs,
    },
    /// Compare the closed forms with the numerical oracle.
    Validate {
        #[command(flatten)]
        params: ParamArgs,
        /// Largest accepted error.
        #[arg(long)]
        tol: Option<f64>,
        /// Perturb one closed-form term, e.g. g23 or chi1.
        #[arg(long, hide = true)]
        corrupt: Option<String>,
    },
    /// Entanglement entropy of the initial pure pair.
    EntropyInitial(ParamArgs),
}

#[derive(Debug, Args)]
struct VaryArgs {
    /// Parameter to sweep.
    #[arg(long)]
    vary: Option<String>,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    values: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,
    /// Relative width of the initial pair (or the width of a single particle).
    #[arg(long)]
    s: Option<f64>,
    /// Centre-of-mass width.
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    gamma1: Option<f64>,
    #[arg(long)]
    gamma2: Option<f64>,
    #[arg(long)]
    temp1: Option<f64>,
    #[arg(long)]
    temp2: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
    #[arg(long)]
    hbar: Option<f64>,
    /// Boltzmann constant.
    #[arg(long)]
    kb: Option<f64>,
    #[arg(long)]
    omega0: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_parser = parse_convention)]
    convention: Option<NegativityConvention>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_convention(s: &str) -> Result<NegativityConvention, String> {
    s.parse()
        .map_err(|_| format!("expected 'standard' or 'paper', got '{s}'"))
}

impl ParamArgs {
    fn settings(&self) -> Result<Settings, ConfigError> {
        let flags = Settings {
            scenario: self.scenario,
            s: self.s,
            d: self.d,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            temp1: self.temp1,
            temp2: self.temp2,
            mass: self.mass,
            hbar: self.hbar,
            kb: self.kb,
            omega0: self.omega0,
            tmax: self.tmax,
            points: self.points,
            convention: self.convention,
            out: self.out.clone(),
            ..Settings::default()
        };
        let file = match &self.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        Ok(flags.over(file))
    }
}

impl VaryArgs {
    fn apply(&self, s: Settings) -> Settings {
        Settings {
            vary: self.vary.clone(),
            values: self.values.clone(),
            ..Settings::default()
        }
        .over(s)
    }
}

enum Failure {
    Config(String),
    Other(String),
    Validation,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Self::Config(e.0)
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Self::Other(e.to_string())
    }
}

impl From<commands::SweepError> for Failure {
    fn from(e: commands::SweepError) -> Self {
        match e {
            commands::SweepError::Config(c) => c.into(),
            other => Self::Other(other.to_string()),
        }
    }
}

fn emit(table: &Table, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = table.to_csv_string();
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Other(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Other(format!("cannot write to stdout: {e}"))),
    }
}

fn sweep_spec(s: &Settings) -> Result<Option<(String, Vec<f64>)>, ConfigError> {
    match (&s.vary, &s.values) {
        (Some(v), Some(vals)) => Ok(Some((v.clone(), vals.clone()))),
        (None, None) => Ok(None),
        (Some(_), None) => Err(ConfigError("--vary needs --values".into())),
        (None, Some(_)) => Err(ConfigError("--values needs --vary".into())),
    }
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run(p) => {
            let cfg = p.settings()?.resolve()?;
            emit(&time_series(&cfg)?, cfg.out.as_ref())
        }
        Command::Sweep { params, vary } => {
            let s = vary.apply(params.settings()?);
            let (name, values) =
                sweep_spec(&s)?.ok_or_else(|| ConfigError("sweep needs --vary and --values".into()))?;
            let threads = commands::threads_from_env()?;
            let table = sweep(&s, &name, &values, threads)?;
            emit(&table, s.out.as_ref())
        }
        Command::Esd { params, vary } => {
            let s = vary.apply(params.settings()?);
            let spec = sweep_spec(&s)?;
            let threads = commands::threads_from_env()?;
            let table = esd_table(&s, spec.as_ref().map(|(n, v)| (n.as_str(), v.as_slice())), threads)?;
            emit(&table, s.out.as_ref())
        }
        Command::Validate { params, tol, corrupt } => {
            let s = Settings {
                tol,
                ..Settings::default()
            }
            .over(params.settings()?);
            let cfg = s.resolve()?;
            let tol = s.tol.unwrap_or(config::defaults::TOL);
            if !(tol.is_finite() && tol > 0.0) {
                return Err(ConfigError(format!("tol must be positive, got {tol}")).into());
            }
            if let Some(c) = &corrupt {
                if !validate::corruptible_terms().contains(c) {
                    return Err(ConfigError(format!("unknown term '{c}' for --corrupt")).into());
                }
            }
            let report = validate(&cfg, tol, corrupt.as_deref())?;
            emit(&report.table(), cfg.out.as_ref())?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Validation)
            }
        }
        Command::EntropyInitial(p) => {
            let cfg = p.settings()?.resolve()?;
            emit(&entropy_initial(&cfg)?, cfg.out.as_ref())
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Validation) => {
            eprintln!("validation failed");
            EXIT_FAILURE
        }
    }
}
