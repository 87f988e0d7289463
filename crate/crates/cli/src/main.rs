//! `ost`: tools for the one-sided transposition shuffle. Exact spectra via
//! standard tableaux, mixing-time bounds with built-in cross-checks, seeded
//! Monte Carlo experiments, and eigenvector lifting.
//!
//! Exit codes: 0 success, 2 configuration error, 3 size cap exceeded,
//! 4 verification failure. clap's own usage errors also exit 2.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::OutputFormat;

pub enum CliError {
    Config(String),
    Cap(String),
    Verify(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Cap(_) => 3,
            Self::Verify(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Config(m) | Self::Cap(m) | Self::Verify(m) => m,
        }
    }
}

impl From<ost_core::Error> for CliError {
    fn from(e: ost_core::Error) -> Self {
        match &e {
            ost_core::Error::CapExceeded { .. } => Self::Cap(e.to_string()),
            ost_core::Error::Verification(_) => Self::Verify(e.to_string()),
            _ => Self::Config(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ost",
    version,
    about = "Spectra, mixing bounds, and experiments for the one-sided transposition shuffle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every eigenvalue of the walk, exactly, one line per standard tableau.
    Spectrum(SpectrumArgs),
    /// Mixing-time bounds per step count, cross-checked against each other.
    Bounds(BoundsArgs),
    /// Seeded Monte Carlo experiments on large decks.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Exact eigenvectors built by growing the deck one card at a time.
    Lift(LiftArgs),
}

#[derive(Subcommand)]
enum SimulateCmd {
    /// Probability of a fixed point in the slow-to-touch segment after t steps.
    FixedPoints(FixedPointArgs),
    /// Hitting time of the counting process that dominates card collection.
    Coupon(CouponArgs),
}

#[derive(Args)]
struct WeightArgs {
    /// Bias exponent: the right hand lands on position j with weight j^alpha.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "weights")]
    alpha: Option<f64>,
    /// Weight table file: one positive decimal per line, position 1 first.
    #[arg(long, value_name = "FILE")]
    weights: Option<PathBuf>,
}

#[derive(Args)]
struct TimeArgs {
    /// Step count.
    #[arg(long, conflicts_with = "t_range")]
    t: Option<u32>,
    /// Inclusive step range, written A..B.
    #[arg(long, value_name = "A..B")]
    t_range: Option<String>,
}

#[derive(Args)]
struct OutArgs {
    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Deck size.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    weight: WeightArgs,
    /// Cross-check the tableau eigenvalues against the dense transition matrix.
    #[arg(long)]
    verify_matrix: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
enum Mode {
    /// Exact rational arithmetic for the TV column.
    Rational,
    /// Double-precision arithmetic, raising the TV degree cap.
    Float,
}

#[derive(Args)]
struct BoundsArgs {
    /// Deck size.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    time: TimeArgs,
    /// Arithmetic for the exact TV column.
    #[arg(long, value_enum, default_value_t = Mode::Rational)]
    mode: Mode,
    /// Also run the exhaustive eigenvalue-ordering predicate sweep.
    #[arg(long)]
    predicates: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct FixedPointArgs {
    /// Deck size.
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    weight: WeightArgs,
    #[command(flatten)]
    time: TimeArgs,
    /// Independent walks per step count.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Base seed; trial k uses stream k of this seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CouponArgs {
    /// Deck size.
    #[arg(long)]
    n: usize,
    /// Bias exponent selecting the process variant.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Window constant: the tail bound needs c > 2 (c > 3 - alpha below exponent 1).
    #[arg(long, allow_hyphen_values = true)]
    c: f64,
    /// Independent chains.
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    /// Base seed; chain k uses stream k of this seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct LiftArgs {
    /// Deck size.
    #[arg(long)]
    n: usize,
    /// Restrict to one shape, written as comma-separated row lengths.
    #[arg(long)]
    shape: Option<String>,
    /// Also sweep the operator recursion identity over every appended letter.
    #[arg(long)]
    verify_master: bool,
    #[command(flatten)]
    out: OutArgs,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Simulate(SimulateCmd::FixedPoints(a)) => commands::fixed_points(a),
        Command::Simulate(SimulateCmd::Coupon(a)) => commands::coupon(a),
        Command::Lift(a) => commands::lift(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
