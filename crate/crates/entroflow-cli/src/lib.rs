//! Implementation of the `entroflow` binary: flag and config resolution,
//! CSV and manifest output, and the verification suites. The binary in
//! `main.rs` is a thin shell over [`run`].

pub mod args;
pub mod commands;
pub mod config;
pub mod errors;
pub mod literals;
pub mod output;
pub mod verify;

use args::{Cli, Command};
use errors::CliError;

/// Dispatches a parsed invocation. `threads` caps the Monte Carlo worker
/// count (0 = automatic); it comes from the ENTROFLOW_THREADS variable.
pub fn run(cli: &Cli, threads: usize) -> Result<(), CliError> {
    match &cli.command {
        Command::Ou(a) => commands::cmd_ou(a),
        Command::Dde(a) => commands::cmd_dde(a),
        Command::Entropy(a) => commands::cmd_entropy(a),
        Command::Stability(a) => commands::cmd_stability(a),
        Command::Verify(a) => commands::cmd_verify(a, threads),
    }
}

/// Reads ENTROFLOW_THREADS; unset means 0 (automatic).
pub fn threads_from_env() -> Result<usize, String> {
    match std::env::var("ENTROFLOW_THREADS") {
        Err(_) => Ok(0),
        Ok(s) => s.trim().parse().map_err(|_| {
            format!("ENTROFLOW_THREADS must be a nonnegative integer, got {s:?}")
        }),
    }
}
