//! `potato` — generate gap-free packings and verify their perimeter
//! properties.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 invalid usage or
//! malformed input, 3 generation failure, 4 model/operation mismatch.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use potato_core::divergence::DivergenceVerdict;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "potato", version, about = "Gap-free packing generators and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a packing document.
    Generate {
        #[command(subcommand)]
        kind: GenerateCommand,
    },
    /// Verify properties of a packing document or of the grid axioms.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Sample horizontal lines through a disk packing.
    Slice(SliceArgs),
    /// Estimate the box-counting dimension of the residual set.
    Dimension(DimensionArgs),
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Apollonian gasket via the Descartes circle recursion.
    Gasket(GasketArgs),
    /// Random greedy disk packing of the unit square.
    Greedy(GreedyArgs),
    /// Dyadic square tiling of the unit square (finite-perimeter control).
    Squares(SquaresArgs),
}

#[derive(Args)]
struct GasketArgs {
    /// Recursion depth (generations beyond the seed circles).
    #[arg(long, default_value_t = 6)]
    depth: u32,
    /// Seed curvatures: negative outer circle, two positive inner circles.
    #[arg(long, num_args = 3, value_delimiter = ',', default_values_t = [-1.0, 2.0, 2.0], allow_negative_numbers = true)]
    seed_curvatures: Vec<f64>,
    /// Circles smaller than this radius are pruned.
    #[arg(long, default_value_t = 1e-12)]
    min_radius: f64,
    /// Hard cap on the number of generated circles.
    #[arg(long, default_value_t = 2_000_000)]
    max_count: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GreedyArgs {
    /// Number of disks to place.
    #[arg(long)]
    count: usize,
    /// Candidate centers sampled per placement.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Radius floor: placement fails below it.
    #[arg(long, default_value_t = 1e-4)]
    min_radius: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SquaresArgs {
    /// Subdivision depth: 4^levels tiles.
    #[arg(long)]
    levels: u32,
    /// Grid resolution (must be divisible by 2^levels).
    #[arg(long, default_value_t = 256)]
    resolution: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check packing hypotheses (disjointness, cover, kissing, positivity).
    Hypotheses {
        input: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compute partial perimeter/diameter sums and grade divergence.
    Divergence {
        input: PathBuf,
        /// Fail (exit 1) unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<ExpectedVerdict>,
        /// Clip perimeters to an explicit disk window `cx,cy,r`
        /// (disk-model documents only).
        #[arg(long, num_args = 3, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "window_radius")]
        window: Option<Vec<f64>>,
        /// Clip perimeters to a disk window of this radius centered at the
        /// contact point of the two largest members.
        #[arg(long)]
        window_radius: Option<f64>,
        /// Write the per-member running sums as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the random grid axiom suite.
    Axioms {
        /// Grid resolution per axis.
        #[arg(long, default_value_t = 128)]
        grid: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check the block-union perimeter certificates.
    Tailunion {
        input: PathBuf,
        /// Largest block end index to sweep (default: whole family, capped
        /// at 100).
        #[arg(long)]
        max_m: Option<usize>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ExpectedVerdict {
    Divergent,
    Finite,
}

impl ExpectedVerdict {
    fn matches(self, verdict: DivergenceVerdict) -> bool {
        match self {
            ExpectedVerdict::Divergent => verdict == DivergenceVerdict::Divergent,
            ExpectedVerdict::Finite => verdict == DivergenceVerdict::Finite,
        }
    }
}

#[derive(Args)]
struct SliceArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    lines: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Slice in the direction rotated by this angle (radians) instead of
    /// horizontally; requires a disk ambient.
    #[arg(long, allow_negative_numbers = true)]
    angle: Option<f64>,
    /// Write per-line samples as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the summary statistics as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct DimensionArgs {
    input: PathBuf,
    /// Dyadic scale range `lo:hi` (box sides 2^-lo .. 2^-hi).
    #[arg(long, default_value = "5:10")]
    scales: String,
    #[arg(long, default_value_t = 4096)]
    resolution: usize,
    /// Keep cells with any corner outside every disk.
    #[arg(long)]
    conservative: bool,
    /// Write scale/count rows as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("POTATO_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(outcome) => outcome.exit_code(),
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code())
        }
    }
}
