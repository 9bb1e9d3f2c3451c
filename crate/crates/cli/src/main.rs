//! `fpa`: command-line front end for frequency permutation array codes.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when a size guard
//! refuses the computation.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "fpa",
    version,
    about = "Frequency permutation array codes under the l-infinity metric"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a k-bit message into a word of S_n^lambda.
    Encode {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        n: usize,
        /// Message bits, leftmost first, e.g. 10.
        #[arg(long)]
        message: String,
    },
    /// Decode a received word back to k message bits.
    Decode {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated symbols, e.g. 3,1,1,2,2,3.
        #[arg(long)]
        word: String,
    },
    /// Decode a single message bit with the randomized local decoder.
    Local {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        word: String,
        /// 1-based message index.
        #[arg(long)]
        i: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exact and asymptotic bounds on the maximum code size.
    Bounds {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        /// Largest permanent order computed exactly.
        #[arg(long, default_value_t = 28)]
        exact_cap: usize,
    },
    /// Volume of the radius-d ball in S_n^lambda.
    Ball {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = BallMethod::Exact)]
        method: BallMethod,
    },
    /// Permanent of the band matrix A^(lambda,n,d) or of explicit rows.
    Perm(PermArgs),
    /// Greedy code construction with minimum distance d.
    Greedy {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Print the codewords as well as the size.
        #[arg(long)]
        list: bool,
    },
    /// Seeded encode/perturb/decode experiment.
    Channel {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Apply bounded noise to a word.
    Perturb {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        word: String,
        #[arg(long)]
        delta: usize,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Private information retrieval over lambda+1 replicated servers.
    Pir {
        #[command(subcommand)]
        command: PirCommand,
    },
}

#[derive(Args)]
struct PermArgs {
    #[arg(long, requires_all = ["n", "d"], conflicts_with = "rows")]
    lambda: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Explicit 0/1 matrix, rows separated by commas, e.g. 110,011,101.
    #[arg(long, required_unless_present = "lambda")]
    rows: Option<String>,
    #[arg(long, value_enum, default_value_t = PermMethod::Ryser)]
    method: PermMethod,
    /// Print the matrix before the permanent (plain format).
    #[arg(long)]
    show_matrix: bool,
}

#[derive(Args)]
struct NoiseArgs {
    #[arg(long, value_enum, default_value_t = NoiseMode::ExactUniform)]
    mode: NoiseMode,
    /// Swap attempts for swap-walk noise (default 10n).
    #[arg(long)]
    walk_steps: Option<usize>,
}

#[derive(Subcommand)]
enum PirCommand {
    /// Retrieve one bit and show the query sent to each server.
    Retrieve {
        #[command(flatten)]
        farm: FarmArgs,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Estimate the privacy parameter (max statistical distance).
    Privacy {
        #[command(flatten)]
        farm: FarmArgs,
        #[arg(long, value_enum, default_value_t = PrivacyArg::Exact)]
        mode: PrivacyArg,
        /// Retrievals per target in monte-carlo mode.
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Fraction of retrievals that return the stored bit.
    Retrievability {
        #[command(flatten)]
        farm: FarmArgs,
        #[arg(long, default_value_t = 1_000)]
        trials: u64,
        /// Replace server 0's replica with a swap-walk perturbation at this radius.
        #[arg(long)]
        corrupt_delta: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct FarmArgs {
    #[arg(long)]
    lambda: usize,
    #[arg(long)]
    n: usize,
    /// Stored message bits.
    #[arg(long)]
    message: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum BallMethod {
    Exact,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum PermMethod {
    Ryser,
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum NoiseMode {
    ExactUniform,
    SwapWalk,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrivacyArg {
    Exact,
    MonteCarlo,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command, cli.format) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fpa: error: {e}");
            ExitCode::from(if e.is_capability_guard() { 3 } else { 2 })
        }
    }
}
