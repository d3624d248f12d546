//! Command-line front end for the `wb` binary.
//!
//! Every subcommand reads an optional JSON config (`--config`), applies flag
//! overrides, and writes its datasets into `--out`. Exit codes: 0 success,
//! 1 failed acceptance check or I/O error, 2 configuration error.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{
    cmd_figures, cmd_flow, cmd_montecarlo, cmd_packet, cmd_wigner_grid, Outcome, FLOW_TIME_POINTS,
    MONTECARLO_TIME_POINTS, PACKET_TIME_POINTS,
};
pub use config::{Format, PacketSource, ResolvedPacket, RunConfig};
pub use output::{fmt_num, Cell, Emitter, Table};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "WB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "wb", version, about = "Phase-space datasets for free Gaussian wave packets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON config file with flat keys.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "wb-out")]
    pub out: PathBuf,

    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Ensemble size.
    #[arg(long = "n", global = true)]
    pub n: Option<usize>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Reject scenarios whose detector is closer than 3 initial spreads.
    #[arg(long, global = true)]
    pub strict_scenario: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Packet quantities (center, alpha, eps, spread, L, t_cl) on the time grid.
    Packet,
    /// Probability beyond the detector and its shift/shear rates.
    Flow,
    /// Datasets behind the phase-space figures.
    Figures,
    /// Classical ensemble vs quantum probability.
    Montecarlo,
    /// Dimensionless Wigner function on a (xi, eta) grid.
    WignerGrid,
}

impl Cli {
    /// Config file merged with flag overrides.
    pub fn run_config(&self) -> crate::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_path(path).map_err(|e| match e {
                Error::Io { path, source } => Error::config(format!("cannot read config {}: {source}", path.display())),
                other => other,
            })?,
            None => RunConfig::default(),
        };
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.n.is_some() {
            cfg.n = self.n;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        if self.strict_scenario {
            cfg.strict_scenario = Some(true);
        }
        Ok(cfg)
    }
}

/// Runs one parsed command and returns the outcome.
pub fn execute(cli: &Cli) -> crate::Result<Outcome> {
    let cfg = cli.run_config()?;
    if cfg.n == Some(0) {
        return Err(Error::config("--n must be positive"));
    }
    match cli.command {
        Command::Packet => cmd_packet(&cfg, &cli.out),
        Command::Flow => cmd_flow(&cfg, &cli.out),
        Command::Figures => cmd_figures(&cfg, &cli.out),
        Command::Montecarlo => cmd_montecarlo(&cfg, &cli.out),
        Command::WignerGrid => cmd_wigner_grid(&cfg, &cli.out),
    }
}

pub fn exit_code(result: &crate::Result<Outcome>) -> i32 {
    match result {
        Ok(o) if o.check_failed => EXIT_CHECK_FAILED,
        Ok(_) => EXIT_OK,
        Err(Error::Config(_)) => EXIT_CONFIG,
        Err(_) => EXIT_CHECK_FAILED,
    }
}

/// Parses `args`, runs the command, prints to stdout/stderr, and returns
/// the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let result = execute(&cli);
    match &result {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            print!("{}", outcome.stdout);
        }
        Err(e) => eprintln!("error: {e}"),
    }
    exit_code(&result)
}

/// Worker cap from [`THREADS_ENV`], if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}
