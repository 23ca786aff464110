// SPDX-License-Identifier: Apache-2.0

//! `der`: community detection from the command line.
//!
//! Exit codes: 0 on success, 1 for usage, parameter or input-format errors,
//! 2 when a file cannot be read or written.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use der_core::der::{DEFAULT_MAX_ITERS, DEFAULT_RESTARTS, DEFAULT_WALK_LENGTH};
use der_core::overlap::DEFAULT_THETA;

#[derive(Debug, Parser)]
#[command(name = "der", version, about = "Random-walk entropy community detection")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition a graph into k clusters.
    Cluster(ClusterArgs),
    /// Overlapping communities from a converged partition.
    Overlap(OverlapArgs),
    /// Compare two partition files.
    Eval(EvalArgs),
    /// Sample a planted-partition graph.
    SbmGen(SbmGenArgs),
    /// One-iteration recovery experiment on two-block models.
    SbmRecover(SbmRecoverArgs),
    /// Write pair co-occurrence counts of repeated runs.
    CoocExport(CoocArgs),
}

#[derive(Debug, Args, Clone)]
pub struct RunArgs {
    /// Edge list: `u v` or `u v w` per line, `#` comments.
    pub input: PathBuf,
    /// Number of clusters.
    #[arg(short = 'k')]
    pub k: usize,
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Walk length.
    #[arg(short = 'L', default_value_t = DEFAULT_WALK_LENGTH)]
    pub walk_length: usize,
    /// Independent runs merged by co-occurrence; 1 disables merging.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    /// Write the per-iteration cost of every restart as CSV (single run only).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OverlapArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(short = 'L', default_value_t = 2)]
    pub walk_length: usize,
    /// Membership threshold relative to the best community, in (0, 1].
    #[arg(long, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub first: PathBuf,
    pub second: PathBuf,
}

#[derive(Debug, Args)]
pub struct SbmGenArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'p')]
    pub p: f64,
    #[arg(short = 'q')]
    pub q: f64,
    /// Number of blocks.
    #[arg(short = 'k', default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge list output.
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
    /// Planted partition output (default: `<output>.planted`).
    #[arg(long)]
    pub planted: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SbmRecoverArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'p')]
    pub p: f64,
    #[arg(short = 'q')]
    pub q: f64,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(short = 'L', default_value_t = 1)]
    pub walk_length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct CoocArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(short = 'L', default_value_t = DEFAULT_WALK_LENGTH)]
    pub walk_length: usize,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("DER_LOG", "error");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            log::error!("could not configure thread pool: {err}");
        }
    }
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
