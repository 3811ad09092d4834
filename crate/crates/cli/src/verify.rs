//! Property batteries behind `qfdiv verify`. Every property reduces to a
//! slack that is non-negative when it holds (its tolerance included); the
//! summary keeps per-property counts and the worst slack seen.

use std::io::Write;

use qfdiv::bounds::{
    continuity_first_arg, entropy_continuity, fvdg_improved, fvdg_previous, reverse_pinsker_f, reverse_pinsker_hellinger, reverse_pinsker_kl, BoundReport,
};
use qfdiv::contraction::{chi2_ratio, eta_f_sampled, eta_tr, eta_x2_local};
use qfdiv::dpriv::{check_dp, depolarizing_qubit_delta, dp_shortcut_bounds, ldp_divergence_bound, NeighborSet};
use qfdiv::fdiv::{chi2_closed, classical_f_div, d_f_degroot, d_f_integral, d_f_single_integral, umegaki};
use qfdiv::hockey::{d_max, e_gamma, trace_distance};
use qfdiv::optim::OptimizerConfig;
use qfdiv::renyi::{d_alpha, geometric_renyi, measured_renyi_lower, petz_renyi, renyi_bound_chain, sandwiched_renyi, MeasurementStrategy};
use qfdiv::states::{depolarizing, random_channel, random_density, random_pure};
use qfdiv::{ConvexFunction, DensityMatrix, C64};
use serde_json::{json, Value};

use crate::args::VerifyArgs;
use crate::commands::{num, EXIT_VIOLATIONS};
use crate::error::{CliError, CliResult};

pub const SUITES: &[&str] = &["hockey", "fdiv", "renyi", "contraction", "bounds", "dp"];
const MAX_VERIFY_DIM: usize = 6;
const REL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyTally {
    pub suite: &'static str,
    pub name: String,
    pub checks: usize,
    pub violations: usize,
    /// `+∞` until the first check.
    pub worst_slack: f64,
    pub first_violation: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub tallies: Vec<PropertyTally>,
}

impl Summary {
    pub fn violations(&self) -> usize {
        self.tallies.iter().map(|t| t.violations).sum()
    }

    pub fn checks(&self) -> usize {
        self.tallies.iter().map(|t| t.checks).sum()
    }

    fn record(&mut self, suite: &'static str, name: &str, slack: f64, context: &str) {
        let idx = match self.tallies.iter().position(|t| t.suite == suite && t.name == name) {
            Some(i) => i,
            None => {
                self.tallies.push(PropertyTally {
                    suite,
                    name: name.to_string(),
                    checks: 0,
                    violations: 0,
                    worst_slack: f64::INFINITY,
                    first_violation: None,
                });
                self.tallies.len() - 1
            }
        };
        let t = &mut self.tallies[idx];
        t.checks += 1;
        // NaN counts as a violation
        if !(slack >= 0.0) {
            t.violations += 1;
            t.first_violation.get_or_insert_with(|| format!("{context}: slack {slack:e}"));
        }
        if slack < t.worst_slack || slack.is_nan() {
            t.worst_slack = slack;
        }
    }

    pub fn to_json(&self) -> Value {
        let props: Vec<Value> = self
            .tallies
            .iter()
            .map(|t| {
                json!({
                    "suite": t.suite,
                    "property": t.name,
                    "checks": t.checks,
                    "violations": t.violations,
                    "worst_slack": num(t.worst_slack),
                    "first_violation": t.first_violation,
                })
            })
            .collect();
        json!({"checks": self.checks(), "violations": self.violations(), "properties": props})
    }
}

/// Records properties of one suite for one `(dimension, seed)` case.
struct Case<'a> {
    summary: &'a mut Summary,
    suite: &'static str,
    context: String,
}

impl Case<'_> {
    fn check(&mut self, name: &str, slack: f64) {
        self.summary.record(self.suite, name, slack, &self.context);
    }

    /// `|a − b| ≤ tol`.
    fn close(&mut self, name: &str, a: f64, b: f64, tol: f64) {
        self.check(name, tol - (a - b).abs());
    }

    fn bound(&mut self, r: &BoundReport) {
        let slack = if r.slack.is_infinite() { r.slack } else { r.slack + r.abs_error };
        self.check(r.bound_name, slack);
    }
}

pub fn run_suite(suite: &str, seeds: std::ops::Range<u64>, dims: &[usize]) -> Summary {
    let mut summary = Summary::default();
    let suite: &'static str = SUITES.iter().find(|&&s| s == suite).expect("validated suite name");
    for seed in seeds {
        for &d in dims {
            let context = format!("d={d} seed={seed}");
            let mut case = Case { summary: &mut summary, suite, context };
            let base = seed.wrapping_mul(7919).wrapping_add(d as u64 * 104_729);
            let outcome = match suite {
                "hockey" => hockey(&mut case, d, seed, base),
                "fdiv" => fdiv(&mut case, d, base),
                "renyi" => renyi(&mut case, d, base),
                "contraction" => contraction(&mut case, d, seed, base),
                "bounds" => bounds(&mut case, d, seed, base),
                _ => dp(&mut case, d, seed, base),
            };
            if let Err(e) = outcome {
                let msg = format!("{}: {e}", case.context);
                case.summary.record(suite, "evaluation", f64::NEG_INFINITY, &msg);
            }
        }
    }
    summary
}

fn full_pair(d: usize, base: u64) -> qfdiv::Result<(DensityMatrix, DensityMatrix)> {
    Ok((random_density(d, d, base)?, random_density(d, d, base + 1)?))
}

fn hockey(c: &mut Case<'_>, d: usize, seed: u64, base: u64) -> qfdiv::Result<()> {
    let rho = random_density(d, d, base)?;
    let sigma = random_density(d, if seed % 4 == 3 { d - 1 } else { d }, base + 1)?;
    let mut range = f64::INFINITY;
    for g in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let e = e_gamma(&rho, &sigma, g)?;
        range = range.min(e.min(g.min(1.0) - e) + 1e-12);
    }
    c.check("e_gamma_range", range);
    c.close("e1_trace_distance", e_gamma(&rho, &sigma, 1.0)?, trace_distance(&rho, &sigma)?, 1e-12);
    let grid: Vec<f64> = (-6..=6).map(|k| 2f64.powf(k as f64 / 2.0)).collect();
    let values = grid.iter().map(|&g| e_gamma(&rho, &sigma, g)).collect::<qfdiv::Result<Vec<_>>>()?;
    let mut mono = f64::INFINITY;
    for k in 0..grid.len() - 1 {
        let step = if grid[k + 1] <= 1.0 { values[k + 1] - values[k] } else { values[k] - values[k + 1] };
        mono = mono.min(step + 1e-12);
    }
    c.check("gamma_monotone", mono);
    c.close("exchange_symmetry", e_gamma(&rho, &sigma, 3.0)?, 3.0 * e_gamma(&sigma, &rho, 1.0 / 3.0)?, 1e-11);
    let dm = d_max(&rho, &sigma)?;
    if dm.is_finite() {
        c.check("vanishes_beyond_dmax", 1e-10 - e_gamma(&rho, &sigma, dm.exp() * (1.0 + 1e-8))?);
    }
    let ch = random_channel(d, d, 2, base + 2)?;
    let (out_r, out_s) = (ch.apply(&rho)?, ch.apply(&sigma)?);
    for g in [1.0, 2.0] {
        c.check("data_processing", e_gamma(&rho, &sigma, g)? - e_gamma(&out_r, &out_s, g)? + 1e-12);
    }
    Ok(())
}

fn generators() -> Vec<ConvexFunction> {
    vec![
        ConvexFunction::kl(),
        ConvexFunction::chi2(),
        ConvexFunction::js(),
        ConvexFunction::hellinger(0.5).expect("valid order"),
        ConvexFunction::hellinger(2.0).expect("valid order"),
        ConvexFunction::lecam(0.5).expect("valid weight"),
    ]
}

fn fdiv(c: &mut Case<'_>, d: usize, base: u64) -> qfdiv::Result<()> {
    let (rho, sigma) = full_pair(d, base)?;
    let kl = d_f_integral(&ConvexFunction::kl(), &rho, &sigma, REL_TOL)?;
    c.close("umegaki_identity", kl.value, umegaki(&rho, &sigma)?, (10.0 * kl.abs_error).max(1e-7));
    let chi = d_f_integral(&ConvexFunction::chi2(), &rho, &sigma, REL_TOL)?;
    c.close("chi2_identity", chi.value, chi2_closed(&rho, &sigma)?, (10.0 * chi.abs_error).max(1e-7));
    let p = rho.eigvalsh()?;
    let q = sigma.eigvalsh()?;
    let (dp, dq) = (DensityMatrix::from_real_diagonal(&p)?, DensityMatrix::from_real_diagonal(&q)?);
    let ch = random_channel(d, d, 2, base + 2)?;
    let (out_r, out_s) = (ch.apply(&rho)?, ch.apply(&sigma)?);
    for f in generators() {
        let v = d_f_integral(&f, &dp, &dq, REL_TOL)?;
        c.close("classical_reduction", v.value, classical_f_div(&p, &q, &f)?, 1e-7);
        let full = d_f_integral(&f, &rho, &sigma, REL_TOL)?;
        c.check("nonnegativity", full.value + full.abs_error);
        let single = d_f_single_integral(&f, &rho, &sigma, REL_TOL)?;
        let degroot = d_f_degroot(&f, &rho, &sigma, REL_TOL)?;
        c.close("evaluator_agreement", single.value, full.value, single.abs_error + full.abs_error + 1e-9);
        c.close("evaluator_agreement", degroot.value, full.value, degroot.abs_error + full.abs_error + 1e-9);
        let out = d_f_integral(&f, &out_r, &out_s, REL_TOL)?;
        c.check("data_processing", full.value - out.value + full.abs_error + out.abs_error + 1e-10);
    }
    Ok(())
}

fn renyi(c: &mut Case<'_>, d: usize, base: u64) -> qfdiv::Result<()> {
    let (rho, sigma) = full_pair(d, base)?;
    for alpha in [0.5, 2.0] {
        let v = d_alpha(&rho, &sigma, alpha, REL_TOL)?;
        let e = v.abs_error + 1e-9;
        let measured = measured_renyi_lower(&rho, &sigma, alpha, MeasurementStrategy::NsPair)?;
        c.check("measured_le_d_alpha", v.value - measured + e);
        c.check("d_alpha_le_geometric", geometric_renyi(&rho, &sigma, alpha)? - v.value + e);
        c.check("sandwiched_le_petz", petz_renyi(&rho, &sigma, alpha)? - sandwiched_renyi(&rho, &sigma, alpha)? + 1e-9);
        let eps = if alpha > 1.0 { (alpha - 1.0) / 2.0 } else { alpha.min(1.0 - alpha) / 2.0 };
        let chain = renyi_bound_chain(&rho, &sigma, alpha, eps, REL_TOL)?;
        let ce = chain.d_alpha.abs_error + 1e-9;
        c.check("bound_chain", (chain.d_alpha.value - chain.lower + ce).min(chain.upper - chain.d_alpha.value + ce));
    }
    let orders = [0.5, 0.8, 1.5, 2.0];
    let vals = orders.iter().map(|&a| d_alpha(&rho, &sigma, a, REL_TOL)).collect::<qfdiv::Result<Vec<_>>>()?;
    for w in vals.windows(2) {
        c.check("alpha_monotone", w[1].value - w[0].value + w[0].abs_error + w[1].abs_error + 1e-9);
    }
    Ok(())
}

fn contraction(c: &mut Case<'_>, d: usize, seed: u64, base: u64) -> qfdiv::Result<()> {
    let cfg = OptimizerConfig { restarts: 6, max_iters: 300, ..OptimizerConfig::with_seed(base) };
    let ch = random_channel(d, d, 2, base)?;
    let tr = eta_tr(&ch, &cfg)?.value;
    let sigma = random_density(d, d, base + 1)?;
    let x2 = eta_x2_local(&ch, &sigma)?.value;
    c.check("x2_local_le_tr", tr - x2 + 2e-3);
    let kl = eta_f_sampled(&ch, &ConvexFunction::kl(), 8, base, None, 1e-9)?.value;
    c.check("f_le_tr", tr - kl + 2e-3);
    let rho = random_density(d, d, base + 2)?;
    c.check("chi2_ratio_le_one", 1.0 + 1e-9 - chi2_ratio(&ch, &rho, &sigma)?);
    let p = [0.1, 0.25, 0.5][(seed % 3) as usize];
    let depol = depolarizing(p, &DensityMatrix::maximally_mixed(d))?;
    c.close("depolarizing_eta_tr", eta_tr(&depol, &cfg)?.value, 1.0 - p, 1e-3);
    c.close("depolarizing_eta_x2", eta_x2_local(&depol, &DensityMatrix::maximally_mixed(d))?.value, (1.0 - p) * (1.0 - p), 1e-3);
    Ok(())
}

fn bounds(c: &mut Case<'_>, d: usize, seed: u64, base: u64) -> qfdiv::Result<()> {
    let (rho, sigma) = full_pair(d, base)?;
    for r in reverse_pinsker_kl(&rho, &sigma)?.all() {
        c.bound(r);
    }
    for f in [ConvexFunction::kl(), ConvexFunction::js()] {
        let (z1, z2) = reverse_pinsker_f(&f, &rho, &sigma, REL_TOL)?;
        c.bound(&z1);
        c.bound(&z2);
    }
    let (h, r) = reverse_pinsker_hellinger(&rho, &sigma, 0.5, REL_TOL)?;
    c.bound(&h);
    c.bound(&r);
    c.bound(&fvdg_improved(&rho, &sigma)?);
    c.bound(&fvdg_previous(&rho, &sigma)?);
    let tau = if seed.is_multiple_of(2) { random_density(d, d, base + 2)? } else { random_pure(d, base + 2)?.mix(0.5, &rho)? };
    for f in [ConvexFunction::kl(), ConvexFunction::js(), ConvexFunction::hellinger(0.5)?] {
        for r in continuity_first_arg(&f, &rho, &tau, &sigma, REL_TOL)? {
            c.bound(&r);
        }
    }
    c.bound(&entropy_continuity(&rho, &sigma)?);
    Ok(())
}

fn basis_state(d: usize, i: usize) -> qfdiv::Result<DensityMatrix> {
    let psi: Vec<C64> = (0..d).map(|j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect();
    DensityMatrix::pure(&psi)
}

fn dp(c: &mut Case<'_>, d: usize, seed: u64, base: u64) -> qfdiv::Result<()> {
    // δ = 0: the hockey-stick and D_max criteria must agree
    let ch = random_channel(d, d, 3, base)?;
    let states = (0..3).map(|k| random_density(d, d, base + 1 + k)).collect::<qfdiv::Result<Vec<_>>>()?;
    let nb = NeighborSet::all_pairs(&states)?;
    let worst = nb.ordered().map(|(a, b)| d_max(&ch.apply(a)?, &ch.apply(b)?)).collect::<qfdiv::Result<Vec<_>>>()?;
    let worst = worst.into_iter().fold(0.0f64, f64::max);
    for eps in [0.5 * worst, worst * (1.0 + 1e-6), 2.0 * worst + 0.1] {
        let report = check_dp(&ch, &nb, eps, 0.0)?;
        let agrees = report.dmax.is_some_and(|m| m.agrees);
        c.check("dmax_criterion_agreement", if agrees { 0.0 } else { -1.0 });
    }
    // qubit depolarizing: closed-form δ(ε) is the pass/fail boundary
    let p = 0.05 + 0.9 * ((seed % 17) as f64 / 16.0);
    let depol = depolarizing(p, &DensityMatrix::maximally_mixed(2))?;
    let qubit_nb = NeighborSet::new(vec![(basis_state(2, 0)?, basis_state(2, 1)?)])?;
    let eps = 0.5 * (seed % 5) as f64 / 4.0;
    let delta = depolarizing_qubit_delta(p, eps);
    let at = check_dp(&depol, &qubit_nb, eps, delta)?;
    c.close("depolarizing_delta_closed_form", at.worst_e, delta, 1e-9);
    // LDP contraction on the same channel
    let samples = [basis_state(2, 0)?, basis_state(2, 1)?, random_pure(2, base + 5)?, random_pure(2, base + 6)?];
    let (rho, sigma) = full_pair(2, base + 7)?;
    let ldp = ldp_divergence_bound(&ConvexFunction::kl(), &depol, &rho, &sigma, eps, delta, &samples, REL_TOL)?;
    c.bound(&ldp.report);
    let pure_eps = ((2.0 - p) / p).ln();
    for r in dp_shortcut_bounds(&depol, &qubit_nb, pure_eps, &[sigma])? {
        c.bound(&r);
    }
    Ok(())
}

pub fn verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let suites: Vec<&str> = match args.suite.as_str() {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(CliError::Usage(format!("unknown suite `{s}`; valid suites: {}, all", SUITES.join(", ")))),
    };
    if args.seeds == 0 {
        return Err(CliError::Usage("--seeds must be positive".into()));
    }
    if args.dims.is_empty() || args.dims.iter().any(|&d| !(2..=MAX_VERIFY_DIM).contains(&d)) {
        return Err(CliError::Usage(format!("--dims must list dimensions in 2..={MAX_VERIFY_DIM}")));
    }
    let mut summary = Summary::default();
    for s in &suites {
        summary.tallies.extend(run_suite(s, args.seed..args.seed + args.seeds, &args.dims).tallies);
    }
    let mut report = summary.to_json();
    report["suite"] = json!(args.suite);
    report["seeds"] = json!(args.seeds);
    report["dims"] = json!(args.dims);
    crate::commands::emit_json(out, &report)?;
    Ok(if summary.violations() == 0 { 0 } else { EXIT_VIOLATIONS })
}
