mod certify;
mod config;
mod experiment;
mod fail;
mod inputs;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::FileConfig;
use fail::Failure;

/// Randomized block Kaczmarz solvers with structured regularizers.
#[derive(Debug, Parser)]
#[command(name = "gerk", version)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// TOML file with defaults for any long flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve A x = b from a MatrixMarket matrix and a CSV right-hand side.
    Solve(solve::SolveArgs),
    /// Run experiment i (least squares) or ii (impulsive noise).
    Experiment(experiment::ExperimentArgs),
    /// Compute the error-bound constant and check it by sampling.
    Certify(certify::CertifyArgs),
}

/// Parameters shared by all commands.
#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// real or complex
    #[arg(long)]
    pub field: Option<String>,
}

impl Common {
    /// Fills unset flags from the config file.
    pub fn merge(mut self, file: &FileConfig) -> Self {
        self.lambda = self.lambda.or(file.lambda);
        self.eps = self.eps.or(file.eps);
        self.tau = self.tau.or(file.tau);
        self.seed = self.seed.or(file.seed);
        self.field = self.field.or_else(|| file.field.clone());
        self
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    if let Some(n) = cli.threads.or(file.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::input(format!("cannot start {n} threads: {e}")))?;
    }
    match cli.command {
        Command::Solve(a) => solve::cmd_solve(a, &file),
        Command::Experiment(a) => experiment::cmd_experiment(a, &file),
        Command::Certify(a) => certify::cmd_certify(a, &file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
