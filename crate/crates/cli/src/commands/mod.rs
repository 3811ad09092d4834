//! Subcommand implementations. Each writes its result to `out` and returns
//! the process exit code.

use std::io::Write;

use serde_json::Value;

use crate::args::{Cli, Command};
use crate::error::{CliError, CliResult};

mod divergence;
mod sweep;
mod wrappers;

pub use divergence::divergence;
pub use sweep::{parse_grid, sweep, sweep_table};
pub use wrappers::{contraction, dp_audit, regularize};

/// Exit code of `verify` when some property is violated.
pub const EXIT_VIOLATIONS: i32 = 1;

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::Divergence(a) => divergence(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Verify(a) => crate::verify::verify(a, out),
        Command::Regularize(a) => regularize(a, out),
        Command::Contraction(a) => contraction(a, out),
        Command::DpAudit(a) => dp_audit(a, out),
    }
}

/// JSON number, with infinities as the strings `"inf"`/`"-inf"` (JSON has no
/// literal for them) and NaN as `null`.
pub fn num(v: f64) -> Value {
    if v == f64::INFINITY {
        Value::from("inf")
    } else if v == f64::NEG_INFINITY {
        Value::from("-inf")
    } else {
        serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
    }
}

pub(crate) fn emit_json(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(v).expect("JSON value");
    writeln!(out, "{text}").map_err(CliError::Output)
}

pub(crate) fn check_tol(tol: f64) -> CliResult<()> {
    qfdiv::quad::check_rel_tol(tol)?;
    Ok(())
}
