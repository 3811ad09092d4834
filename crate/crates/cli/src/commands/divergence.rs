use std::io::Write;

use qfdiv::fdiv::{d_f_integral, support_flag};
use qfdiv::hockey::{d_max, hilbert_omega, thompson, trace_distance};
use qfdiv::linalg::fidelity;
use qfdiv::renyi::d_alpha;
use qfdiv::{ConvexFunction, DivergenceValue};
use serde_json::json;

use super::{check_tol, emit_json, num};
use crate::args::{DivergenceArgs, Format, Metric};
use crate::csv::format_number;
use crate::error::{CliError, CliResult};
use crate::io::load_state;

pub fn divergence(args: &DivergenceArgs, out: &mut dyn Write) -> CliResult<i32> {
    check_tol(args.tol)?;
    let rho = load_state(&args.rho)?;
    let sigma = load_state(&args.sigma)?;
    if rho.dim() != sigma.dim() {
        return Err(qfdiv::Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() }.into());
    }
    let (quantity, v) = if let Some(spec) = &args.f {
        let f = ConvexFunction::parse(spec)?;
        (f.spec(), d_f_integral(&f, &rho, &sigma, args.tol)?)
    } else if let Some(alpha) = args.renyi {
        (format!("renyi:alpha={alpha}"), d_alpha(&rho, &sigma, alpha, args.tol)?)
    } else if let Some(metric) = args.metric {
        let value = match metric {
            Metric::Trace => trace_distance(&rho, &sigma)?,
            Metric::Dmax => d_max(&rho, &sigma)?,
            Metric::Thompson => thompson(&rho, &sigma)?,
            Metric::Omega => hilbert_omega(&rho, &sigma)?,
            Metric::Fidelity => fidelity(rho.op(), sigma.op())?,
        };
        let name = format!("{metric:?}").to_lowercase();
        (name, DivergenceValue { value, abs_error: 0.0, support_flag: support_flag(&rho, &sigma)? })
    } else {
        return Err(CliError::Usage("one of --f, --renyi, --metric is required".into()));
    };
    match args.format {
        Format::Json => emit_json(
            out,
            &json!({
                "quantity": quantity,
                "value": num(v.value),
                "abs_error": num(v.abs_error),
                "support_flag": v.support_flag.as_str(),
            }),
        )?,
        Format::Csv => {
            writeln!(out, "value,abs_error,support_flag")?;
            writeln!(out, "{},{},{}", format_number(v.value), format_number(v.abs_error), v.support_flag.as_str())?;
        }
    }
    Ok(0)
}
