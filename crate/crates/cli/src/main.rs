use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod failure;
mod sweep;

use failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "kuhn3", version, about = "Three-player full-street Kuhn poker: equilibria, verification and dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ListingFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TrajectoryFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepWhat {
    Frequencies,
    Profits,
    Stability,
    Classification,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the equilibrium families valid at a pot size.
    Equilibria {
        #[arg(long, allow_negative_numbers = true)]
        pot: f64,
        /// Also print the validity range of every family.
        #[arg(long)]
        all_ranges: bool,
        #[arg(long, value_enum, default_value_t = ListingFormat::Text)]
        format: ListingFormat,
    },
    /// Check a profile against the best-response conditions.
    Verify {
        /// JSON object with the eleven frequency names.
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        pot: f64,
        #[arg(long, default_value_t = kuhn3::verify::DEFAULT_TOL)]
        tol: f64,
    },
    /// Linearised stability of one catalog family.
    Stability {
        #[arg(long)]
        id: String,
        #[arg(long, allow_negative_numbers = true)]
        pot: f64,
        /// Free parameter assignment `name=value`; repeatable.
        #[arg(long = "free", value_name = "NAME=VALUE")]
        free: Vec<String>,
    },
    /// Export the catalog as JSON.
    Catalog {
        #[arg(long, default_value_t = 21)]
        samples: usize,
        /// Upper pot for families valid without bound.
        #[arg(long, default_value_t = 8.0)]
        cap: f64,
    },
    /// Integrate the repeated-play dynamics and classify the run.
    Simulate(SimulateArgs),
    /// Tabulate a quantity over a pot grid.
    Sweep(SweepArgs),
}

#[derive(clap::Args, Debug)]
pub struct SimulateArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub pot: f64,
    /// Initial profile file; overrides the seed.
    #[arg(long)]
    pub init: Option<PathBuf>,
    #[arg(long, env = "KUHN3_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000.0)]
    pub t_end: f64,
    /// JSON object mapping frequency names to gains; missing names keep 1.
    #[arg(long)]
    pub gains: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TrajectoryFormat::Csv)]
    pub format: TrajectoryFormat,
    /// Trajectory destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub sample_dt: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub atol: f64,
    /// Hold log-odds at the saturation limit.
    #[arg(long)]
    pub clamp: bool,
}

#[derive(clap::Args, Debug)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub pot_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub pot_max: f64,
    #[arg(long)]
    pub step: f64,
    #[arg(long, value_enum)]
    pub what: SweepWhat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = "KUHN3_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Classification runs per pot, with consecutive seeds.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
    #[arg(long, default_value_t = 20000.0)]
    pub t_end: f64,
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Equilibria { pot, all_ranges, format } => commands::equilibria(pot, all_ranges, format),
        Command::Verify { profile, pot, tol } => commands::verify(&profile, pot, tol),
        Command::Stability { id, pot, free } => commands::stability(&id, pot, &free),
        Command::Catalog { samples, cap } => commands::catalog(samples, cap),
        Command::Simulate(args) => commands::simulate(&args),
        Command::Sweep(args) => sweep::sweep(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
