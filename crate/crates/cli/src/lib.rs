//! Command-line front end for `pauliexp`.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input and arguments,
//! 2 closure explosion, 3 numerical failure, 4 verification failure,
//! 5 violated method precondition or limit.

pub mod args;
pub mod bench;
pub mod commands;
pub mod complex;
pub mod error;

use args::{Cli, Command};
use error::CliResult;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "PAULIEXP_THREADS";

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Exp(a) => commands::cmd_exp(a),
        Command::Partition(a) => commands::cmd_partition(a),
        Command::Gibbs(a) => commands::cmd_gibbs(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Bench(a) => bench::cmd_bench(a),
        Command::Decompose(a) => commands::cmd_decompose(a),
        Command::Closure(a) => commands::cmd_closure(a),
    }
}

/// Sizes the global worker pool from `PAULIEXP_THREADS` when it is set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV}={value:?} is not a positive integer"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}
