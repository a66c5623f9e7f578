//! `mwt`: simulate Moran-model waiting times, classify regimes and evaluate
//! limit laws from the command line.
//!
//! Exit codes: 0 success, 1 runtime or statistical failure, 2 usage error.

mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use settings::{parse_count, parse_real};

/// Bad flags, missing settings or parameter values outside their domain.
#[derive(Debug)]
pub struct UsageError(pub String);

pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e.0)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "mwt",
    version,
    about = "Waiting times for m neutral mutations in a Moran population"
)]
pub struct Cli {
    /// JSON file with flat keys named like the long flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads [env: MWT_THREADS; default: all cores].
    #[arg(long, global = true, value_parser = parse_count)]
    pub threads: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run replicates and write per-replicate CSV plus a JSON summary.
    Simulate(SimArgs),
    /// Classify (N, mu, m) and print the regime as JSON.
    Regime(RegimeArgs),
    /// Print a limit-law CDF on a grid as CSV.
    LimitCdf(LimitCdfArgs),
    /// Simulate and test the scaled sample against a limit law.
    Compare(CompareArgs),
    /// Evaluate the borderline rate lambda_j(A).
    Lambda(LambdaArgs),
    /// Probability that one mutant lineage ever produces type m.
    Qm(QmArgs),
}

#[derive(Debug, Args)]
pub struct RegimeArgs {
    /// Population size (scientific notation accepted).
    #[arg(long, value_parser = parse_count)]
    pub n: Option<u64>,
    /// Mutation rate per individual.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Number of mutations needed.
    #[arg(long, value_parser = parse_count)]
    pub m: Option<u64>,
    /// Border half-width in ln(mu).
    #[arg(long, value_parser = parse_real)]
    pub band: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub regime: RegimeArgs,
    /// Independent runs [default: 1000].
    #[arg(long, value_parser = parse_count)]
    pub replicates: Option<u64>,
    /// Base seed; replicate i draws from a stream derived from (seed, i) [default: 0].
    #[arg(long, value_parser = parse_count)]
    pub seed: Option<u64>,
    /// Event cap per replicate.
    #[arg(long, value_parser = parse_count)]
    pub budget_events: Option<u64>,
    /// Model-time cap per replicate.
    #[arg(long, value_parser = parse_real)]
    pub budget_time: Option<f64>,
    /// CSV path; the summary is written beside it as `<stem>.summary.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `auto` (regime timescale) or a positive factor.
    #[arg(long)]
    pub scale: Option<String>,
    /// Largest tolerated fraction of truncated replicates.
    #[arg(long, value_parser = parse_real)]
    pub truncation_cap: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// `auto` (the regime's law) or a descriptor such as `exp:1`, `gamma:2`.
    #[arg(long)]
    pub law: Option<String>,
    /// DKW confidence level.
    #[arg(long, value_parser = parse_real)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LimitCdfArgs {
    #[command(flatten)]
    pub regime: RegimeArgs,
    /// Law descriptor; `auto` or absent uses the regime of --n --mu --m.
    #[arg(long)]
    pub law: Option<String>,
    /// `start:stop:count` or a comma-separated list of times.
    #[arg(long)]
    pub t_grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    /// Border constant.
    #[arg(long = "A", value_parser = parse_real)]
    pub a: Option<f64>,
    /// Border index, 1 <= j.
    #[arg(long, value_parser = parse_count)]
    pub j: Option<u64>,
}

#[derive(Debug, Args)]
pub struct QmArgs {
    /// Mutation rate.
    #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Target type, m >= 1.
    #[arg(long, value_parser = parse_count)]
    pub m: Option<u64>,
    /// Exact recursion (default).
    #[arg(long, conflicts_with = "asymptotic")]
    pub exact: bool,
    /// Leading-order power of mu.
    #[arg(long)]
    pub asymptotic: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
