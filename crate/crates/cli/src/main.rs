//! `seqdist`: DTW and edit distance from the command line.
//!
//! Every command prints one JSON report on standard output. Exit codes: 0 success,
//! 1 usage error, 2 malformed input or metric, 3 violated precondition or oracle guard.

mod commands;
mod input;
mod report;
mod workload;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<seqdist::Error> for CliError {
    fn from(e: seqdist::Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Precondition(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "seqdist", version, about = "Exact and approximate DTW and edit distance over metric alphabets")]
pub struct Cli {
    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, env = "SEQDIST_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

/// Two input strings over a metric.
#[derive(Args, Clone)]
pub struct Pair {
    /// First string: a file of whitespace-separated letters (`-` for stdin); `tok*k` repeats a letter.
    x: String,
    /// Second string.
    y: String,
    /// `hamming`, `real`, or a JSON metric file.
    #[arg(long)]
    metric: Option<String>,
    /// Treat X and Y as the strings themselves rather than file names.
    #[arg(long)]
    inline: bool,
    /// Every non-whitespace character is a letter.
    #[arg(long)]
    chars: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// Dynamic time warping distance.
    Dtw {
        #[command(flatten)]
        pair: Pair,
        /// Run the bounded DP: report the distance only if it is at most K.
        #[arg(long, value_name = "K", allow_negative_numbers = true, conflicts_with_all = ["doubling", "band", "quadratic"])]
        bound: Option<f64>,
        /// Output-sensitive exact DTW (the default from n = 4096 on).
        #[arg(long, conflicts_with_all = ["band", "quadratic"])]
        doubling: bool,
        /// Full quadratic DP (the default below n = 4096).
        #[arg(long, conflicts_with = "band")]
        quadratic: bool,
        /// Sakoe-Chiba band heuristic: only cells with |i - j| <= B. An upper bound.
        #[arg(long, value_name = "B")]
        band: Option<usize>,
        /// Cross-check against exhaustive enumeration (tiny inputs only).
        #[arg(long)]
        oracle: bool,
    },
    /// Edit distance: substitutions cost d(a, b), insertions and deletions cost |l|.
    Ed {
        #[command(flatten)]
        pair: Pair,
        /// Only scripts whose DP path stays within |i - j| <= B. An upper bound.
        #[arg(long, value_name = "B")]
        band: Option<usize>,
        #[arg(long)]
        oracle: bool,
    },
    /// Longest common subsequence and the insertion/deletion distance.
    Lcs {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        oracle: bool,
    },
    /// Edit distance computed as the DTW distance of the null-padded strings.
    EdViaDtw {
        #[command(flatten)]
        pair: Pair,
    },
    /// Unit-cost edit distance computed as half the indel distance of the padded strings.
    EdViaLcs {
        #[command(flatten)]
        pair: Pair,
    },
    /// n^ε-approximate DTW over a tree metric or the real line.
    ApproxDtw {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Tree embeddings for real inputs (default ⌈log2 n⌉ + 1).
        #[arg(long)]
        trials: Option<usize>,
        /// Shorthand for `--metric real`.
        #[arg(long, conflicts_with = "tree")]
        real: bool,
        /// Shorthand for `--metric FILE` with a tree metric file.
        #[arg(long, value_name = "FILE")]
        tree: Option<String>,
    },
    /// n^ε-approximate edit distance (randomized).
    ApproxEd {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
    },
    /// Embeds real values into a random well-separated tree and prints it as a metric file.
    Embed {
        /// File of real values.
        input: String,
        #[arg(long)]
        inline: bool,
    },
    /// Generates a seeded random instance.
    Gen {
        #[arg(long, value_enum, default_value_t = GenKind::Hamming)]
        kind: GenKind,
        #[arg(long, default_value_t = 64)]
        n: usize,
        /// Random edits turning x into y; controls the true distance.
        #[arg(long, default_value_t = 4)]
        edits: usize,
        /// Letters (Hamming) or tree nodes (tree).
        #[arg(long, default_value_t = 4)]
        alphabet: u32,
        /// Planted mismatches for the band-adversarial family.
        #[arg(long, default_value_t = 0)]
        planted: usize,
        /// Also write x.txt, y.txt (and metric.json for trees) into this directory.
        #[arg(long, value_name = "DIR")]
        out: Option<std::path::PathBuf>,
    },
    /// Times the DTW methods over a sweep of lengths.
    Bench {
        #[arg(long, value_enum, default_value_t = Family::BandAdversarial)]
        family: Family,
        /// Lengths to sweep (comma separated or repeated).
        #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 2048, 4096])]
        n: Vec<usize>,
        /// Planted mismatches (band-adversarial) or random edits (random).
        #[arg(long, default_value_t = 0)]
        planted: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Sakoe-Chiba band as a fraction of n.
        #[arg(long, default_value_t = 0.1)]
        band_fraction: f64,
        /// Skip the quadratic DP above this length.
        #[arg(long, default_value_t = 16384)]
        quadratic_max: usize,
        /// Letters for the random family.
        #[arg(long, default_value_t = 4)]
        alphabet: u32,
        /// Add the exhaustive oracle where its guard allows.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenKind {
    Hamming,
    Real,
    Tree,
    BandAdversarial,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    BandAdversarial,
    Random,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let argv: Vec<String> = std::env::args().skip(1).collect();
    match commands::run(&cli, argv) {
        Ok(value) => {
            if cli.pretty {
                print!("{}", report::pretty(&value));
            } else {
                println!("{value}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("seqdist: {e}");
            ExitCode::from(e.code())
        }
    }
}
