use std::io::Write;

use qfdiv::contraction::{eta_f_sampled, eta_gamma, eta_tr, eta_x2_global, eta_x2_local, ContractionEstimate};
use qfdiv::dpriv::check_dp;
use qfdiv::optim::OptimizerConfig;
use qfdiv::renyi::regularization_trace;
use qfdiv::{ConvexFunction, DensityMatrix};
use serde_json::{json, Value};

use super::{emit_json, num};
use crate::args::{ContractionArgs, ContractionKind, DpAuditArgs, RegularizeArgs};
use crate::error::{CliError, CliResult};
use crate::io::{load_channel, load_state, read_json, MatrixFile, NeighborFile};

fn state_json(rho: &DensityMatrix) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(rho.op().matrix())).expect("serializable")
}

fn pair_json(pair: &Option<(DensityMatrix, DensityMatrix)>) -> Value {
    match pair {
        Some((a, b)) => json!([state_json(a), state_json(b)]),
        None => Value::Null,
    }
}

pub fn regularize(args: &RegularizeArgs, out: &mut dyn Write) -> CliResult<i32> {
    let rho = load_state(&args.rho)?;
    let sigma = load_state(&args.sigma)?;
    let trace = regularization_trace(&rho, &sigma, args.alpha, args.n_max, args.tol).map_err(CliError::Operation)?;
    let per_n: Vec<Value> = trace
        .per_n
        .iter()
        .map(|p| json!({"n": p.n, "value": num(p.value), "abs_error": num(p.abs_error), "lower": num(p.lower), "upper": num(p.upper)}))
        .collect();
    emit_json(
        out,
        &json!({
            "alpha": num(trace.alpha),
            "epsilon": num(trace.epsilon),
            "petz_ref": num(trace.petz_ref),
            "sandwiched_ref": trace.sandwiched_ref.map_or(Value::Null, num),
            "per_n": per_n,
            "chains_hold": trace.chains_hold(0.0),
        }),
    )?;
    Ok(0)
}

fn need_seed(seed: Option<u64>) -> CliResult<u64> {
    seed.ok_or_else(|| CliError::Usage("--seed is required for randomized estimates".into()))
}

pub fn contraction(args: &ContractionArgs, out: &mut dyn Write) -> CliResult<i32> {
    let channel = load_channel(&args.channel)?;
    let sigma = args.sigma.as_deref().map(load_state).transpose()?;
    let op = CliError::Operation;
    let (name, est): (String, ContractionEstimate) = match args.kind {
        ContractionKind::Gamma => {
            let cfg = OptimizerConfig { restarts: args.restarts, ..OptimizerConfig::with_seed(need_seed(args.seed)?) };
            let est = if args.gamma == 1.0 { eta_tr(&channel, &cfg) } else { eta_gamma(&channel, args.gamma, &cfg) };
            (format!("eta_gamma:gamma={}", args.gamma), est.map_err(op)?)
        }
        ContractionKind::X2Local => {
            let s = sigma.as_ref().ok_or_else(|| CliError::Usage("--sigma is required for x2-local".into()))?;
            ("eta_x2_local".into(), eta_x2_local(&channel, s).map_err(op)?)
        }
        ContractionKind::X2Global => ("eta_x2_global".into(), eta_x2_global(&channel, args.samples, need_seed(args.seed)?).map_err(op)?),
        ContractionKind::F => {
            let spec = args.f.as_deref().ok_or_else(|| CliError::Usage("--f is required for kind f".into()))?;
            let f = ConvexFunction::parse(spec)?;
            let seed = need_seed(args.seed)?;
            (format!("eta_f:{}", f.spec()), eta_f_sampled(&channel, &f, args.samples, seed, sigma.as_ref(), args.tol).map_err(op)?)
        }
    };
    emit_json(
        out,
        &json!({
            "coefficient": name,
            "value": num(est.value),
            "estimate_kind": est.kind.as_str(),
            "witness": pair_json(&est.witness),
        }),
    )?;
    Ok(0)
}

pub fn dp_audit(args: &DpAuditArgs, out: &mut dyn Write) -> CliResult<i32> {
    let channel = load_channel(&args.channel)?;
    let neighbors = read_json::<NeighborFile>(&args.neighbors)?.to_neighbors()?;
    let report = check_dp(&channel, &neighbors, args.eps, args.delta).map_err(CliError::Operation)?;
    let dmax = report.dmax.map_or(Value::Null, |d| json!({"worst_dmax": num(d.worst_dmax), "passes": d.passes, "agrees": d.agrees}));
    emit_json(
        out,
        &json!({
            "eps": num(report.eps),
            "delta": num(report.delta),
            "worst_e": num(report.worst_e),
            "passes": report.passes,
            "worst_pair": pair_json(&Some(report.worst_pair)),
            "dmax": dmax,
        }),
    )?;
    Ok(0)
}
