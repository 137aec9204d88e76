//! `monogamy` command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 on a tolerance failure, 2 on
//! input or usage errors.

mod commands;
mod render;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] monogamy::Error),
    #[error(transparent)]
    Identity(#[from] monogamy::identities::UnknownIdentity),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "monogamy",
    version,
    about = "Information measures and monogamy checks for multi-qubit states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Absolute tolerance for equalities and inequalities
    #[arg(long, default_value = "1e-9")]
    pub tol: f64,
    /// `all` or a comma-separated list of identity names
    #[arg(long, default_value = "all")]
    pub identity: String,
    /// Seed for every random draw
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the rendered output here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full measure table and identity checks for one pure state
    Report {
        /// e.g. `ghz:4`, `w:3`, `bell`, `random:5`, `file:state.json`
        #[arg(long)]
        state: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check identities on seeded Haar-random pure or mixed states
    Fuzz {
        /// Qubit counts: `4`, `2-8` or `2,4,6`
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Fixed rank for mixed identities (default: cycle through all ranks)
        #[arg(long)]
        rank: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Mixed-state purity relations and the total-information bound
    MixedCheck {
        /// e.g. `maximally-mixed:3`, `random-mixed:2:4`, `ghz:3`, `file:rho.json`
        #[arg(long, conflicts_with = "random")]
        rho: Option<String>,
        /// Sample random density matrices instead of loading one
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Time the fast table against Pauli enumeration
    Bench {
        #[arg(long)]
        n: usize,
        /// Timing repetitions per path
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Report { state, common } => commands::report(&state, &common),
        Command::Fuzz {
            n,
            trials,
            rank,
            common,
        } => commands::fuzz(&n, trials, rank, &common),
        Command::MixedCheck {
            rho,
            random,
            m,
            rank,
            trials,
            common,
        } => commands::mixed_check(rho.as_deref(), random, m, rank, trials, &common),
        Command::Bench { n, repeats, common } => commands::bench(n, repeats, &common),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
