//! `flagstar` command-line tool.
//!
//! Exit codes: 0 success, 1 a check failed or a computation was refused,
//! 2 bad usage or unreadable input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "flagstar", version, about = "Flag-no-square triangulations: surgery, encoding and decoding")]
pub struct Cli {
    /// Worker threads for parallel scans.
    #[arg(long, global = true, env = "FLAGSTAR_WORKERS")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Icosahedron,
    Cell600,
    Cycle,
    SimplexBoundary,
    CrossPolytope,
    CompleteBipartite,
    /// A row of `--n` ∂600-cell copies.
    Row,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a standard complex.
    Generate {
        kind: Kind,
        /// Size parameter (cycle length, dimension, copies, or the first part).
        #[arg(long)]
        n: Option<usize>,
        /// Second part of a complete bipartite graph.
        #[arg(long)]
        m: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check flagness, induced squares and the closed-pseudomanifold conditions.
    Verify {
        file: PathBuf,
        /// Also run the exhaustive oracles (small inputs only).
        #[arg(long)]
        oracle: bool,
    },
    /// Star connected sum of two complexes.
    Glue {
        left: PathBuf,
        right: PathBuf,
        /// Site in the left complex, by label or id.
        #[arg(long)]
        v: String,
        /// Site in the right complex, by label or id.
        #[arg(long)]
        u: String,
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Star handle between two vertices of one complex.
    Handle {
        file: PathBuf,
        #[arg(long)]
        v: String,
        #[arg(long)]
        u: String,
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Build the complex encoding a permutation.
    Encode {
        #[arg(long)]
        k: usize,
        /// One-based images, comma separated, e.g. "2,3,1".
        #[arg(long)]
        perm: String,
        /// ∂600-cell copies per base block.
        #[arg(long, default_value_t = 7)]
        base_row: usize,
        /// Refuse base blocks with diameter below 77.
        #[arg(long)]
        proof_scale: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the ground-truth roles here.
        #[arg(long)]
        roles: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Recover the permutation from an encoded complex; prints it as "2,3,1".
    Decode {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Threshold file from `calibrate`; calibrated on the fly otherwise.
        #[arg(long)]
        thresholds: Option<PathBuf>,
        /// Base row length to calibrate for when no threshold file is given.
        #[arg(long, default_value_t = 7)]
        base_row: usize,
        /// Write the full decode report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Measure decoder thresholds on a reference encoding.
    Calibrate {
        #[arg(long, default_value_t = 7)]
        base_row: usize,
        /// Write the thresholds alone, ready for `decode --thresholds`.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Counting bounds: the chain at `--x`, or the edge bound of a file.
    Bounds {
        #[arg(long, conflicts_with = "file")]
        x: Option<u64>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// f-vector, χ, diameter and fns status as JSON.
    Stats { file: PathBuf },
    /// Run an experiment described by a JSON config.
    Pipeline {
        config: PathBuf,
        /// Overrides the output directory of the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
pub struct MapArgs {
    /// Index into the enumerated link isomorphisms.
    #[arg(long, default_value_t = 0)]
    pub map_index: usize,
    /// Use the first orientation-reversing isomorphism.
    #[arg(long, conflicts_with = "map_index")]
    pub reversing: bool,
    /// Refuse results that could fail to be flag-no-square.
    #[arg(long)]
    pub enforce_fns: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}
