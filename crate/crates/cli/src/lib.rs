//! File formats, subcommands and verification batteries of the `qfdiv`
//! command-line tool.

// `!(x >= 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod csv;
pub mod error;
pub mod io;
pub mod verify;

use std::io::Write;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, CliResult};

/// Parses `argv`, runs the command and returns the exit code. Results go to
/// `out`, diagnostics to `err`.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return e.exit_code();
        }
    };
    match commands::run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
