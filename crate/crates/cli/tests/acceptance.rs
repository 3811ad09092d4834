//! Acceptance battery. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero when any criterion fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use qfdiv::bounds::{
    amortized_bound, continuity_first_arg, entropy_continuity, fvdg_improved, fvdg_previous, reverse_pinsker_f, reverse_pinsker_hellinger,
    reverse_pinsker_kl, AmortizedConfig, BoundReport,
};
use qfdiv::contraction::{depol_pullback_divergence, eta_f_sampled, eta_tr, eta_x2_global, eta_x2_local};
use qfdiv::dpriv::{check_dp, depolarizing_qubit_delta, ldp_divergence_bound, NeighborSet};
use qfdiv::fdiv::{
    chi2_closed, classical_f_div, d_f_generalized, d_f_integral, local_chi2_limit, skew_divergence, umegaki, DivergenceValue, DEFAULT_LAMBDAS,
};
use qfdiv::optim::OptimizerConfig;
use qfdiv::renyi::{
    d_alpha, figure_one_states, geometric_renyi, measured_renyi_lower, non_additivity_fixture, petz_renyi, regularization_trace, renyi_bound_chain,
    MeasurementStrategy,
};
use qfdiv::states::{depolarizing, random_channel, random_density, random_pure, random_unitary};
use qfdiv::{ConvexFunction, DensityMatrix, C64};
use qfdiv_cli::args::{Family, SweepArgs, SweepKind};
use qfdiv_cli::commands::sweep_table;
use qfdiv_cli::csv::Table;
use qfdiv_cli::io::save_state;

const REL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

/// Floating-point allowance for closed-form values, the same model the bound
/// reports use.
fn fp(values: &[f64]) -> f64 {
    64.0 * f64::EPSILON * values.iter().filter(|v| v.is_finite()).fold(1.0f64, |m, v| m.max(v.abs()))
}

/// Full-rank random pair in dimension `d`.
fn pair(d: usize, seed: u64) -> (DensityMatrix, DensityMatrix) {
    (random_density(d, d, 2 * seed).unwrap(), random_density(d, d, 2 * seed + 1).unwrap())
}

fn diag(p: &[f64]) -> DensityMatrix {
    DensityMatrix::from_real_diagonal(p).unwrap()
}

/// Deterministic point of `[0, 1)` from an index (golden-ratio sequence).
fn unit(k: u64, salt: f64) -> f64 {
    ((k as f64 + 1.0) * 0.618_033_988_749_894_9 + salt).fract()
}

fn simplex(k: u64, d: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..d).map(|i| 0.02 + unit(k * 7 + i as u64, 0.1 * i as f64 + 0.37)).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

/// Generators with finite divergences on full-rank pairs.
fn registry() -> Vec<ConvexFunction> {
    vec![
        ConvexFunction::kl(),
        ConvexFunction::chi2(),
        ConvexFunction::js(),
        ConvexFunction::hellinger(0.5).unwrap(),
        ConvexFunction::hellinger(1.5).unwrap(),
        ConvexFunction::hellinger(3.0).unwrap(),
        ConvexFunction::lecam(0.3).unwrap(),
        ConvexFunction::linear(2.0).unwrap(),
        ConvexFunction::skew(ConvexFunction::kl(), 0.3, 0.6).unwrap(),
        ConvexFunction::depol_pullback(ConvexFunction::kl(), 0.4).unwrap(),
        ConvexFunction::star(ConvexFunction::kl()),
        ConvexFunction::combination(vec![(0.5, ConvexFunction::kl()), (2.0, ConvexFunction::chi2())]).unwrap(),
    ]
}

/// Agreement of two evaluated values within their combined error.
fn agree(a: &DivergenceValue, b: &DivergenceValue) -> bool {
    (a.value - b.value).abs() <= a.abs_error + b.abs_error + fp(&[a.value, b.value])
}

fn worst(reports: &[BoundReport]) -> f64 {
    reports.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min)
}

fn c1_umegaki() -> Outcome {
    let start = Instant::now();
    let mut ratio = 0.0f64;
    for seed in 0..200u64 {
        let (rho, sigma) = pair(2 + (seed % 3) as usize, seed);
        let kl = d_f_integral(&ConvexFunction::kl(), &rho, &sigma, REL).unwrap();
        let diff = (kl.value - umegaki(&rho, &sigma).unwrap()).abs();
        ratio = ratio.max(diff / 1e-7f64.max(10.0 * kl.abs_error));
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(ratio <= 1.0 && secs < 60.0, format!("200 pairs, max |diff|/tol = {ratio:.3e}, {secs:.2} s"))
}

fn c2_chi2() -> Outcome {
    let mut ratio = 0.0f64;
    for seed in 0..200u64 {
        let (rho, sigma) = pair(2 + (seed % 3) as usize, seed);
        let c = d_f_integral(&ConvexFunction::chi2(), &rho, &sigma, REL).unwrap();
        let diff = (c.value - chi2_closed(&rho, &sigma).unwrap()).abs();
        ratio = ratio.max(diff / 1e-7f64.max(10.0 * c.abs_error));
    }
    let mut rel = 0.0f64;
    for seed in 0..50u64 {
        let (rho, sigma) = pair(2 + (seed % 3) as usize, 1000 + seed);
        let lim = local_chi2_limit(&ConvexFunction::kl(), &rho, &sigma, &DEFAULT_LAMBDAS, REL).unwrap();
        let chi = chi2_closed(&rho, &sigma).unwrap();
        rel = rel.max((lim - chi).abs() / chi);
    }
    Outcome::new(ratio <= 1.0 && rel <= 1e-3, format!("200 pairs, max |diff|/tol = {ratio:.3e}; local limit max rel dev = {rel:.3e} on 50 pairs"))
}

fn c3_classical() -> Outcome {
    let fs = registry();
    let mut dev = 0.0f64;
    for k in 0..200u64 {
        let d = 2 + (k % 3) as usize;
        let (p, q) = (simplex(2 * k, d), simplex(2 * k + 1, d));
        let u = random_unitary(d, k);
        let (rho, sigma) = (diag(&p).conjugate(&u), diag(&q).conjugate(&u));
        for f in &fs {
            let quantum = d_f_integral(f, &rho, &sigma, REL).unwrap();
            dev = dev.max((quantum.value - classical_f_div(&p, &q, f).unwrap()).abs());
        }
    }
    Outcome::new(dev <= 1e-7, format!("200 pairs x {} generators, max |diff| = {dev:.3e}", fs.len()))
}

fn c4_skew_lecam() -> Outcome {
    let grid = [0.0, 0.3, 0.5, 0.7, 1.0];
    let bases = [ConvexFunction::kl(), ConvexFunction::js(), ConvexFunction::hellinger(1.5).unwrap(), ConvexFunction::chi2()];
    let (mut skew_bad, mut lc_bad, mut lc_n) = (0, 0, 0);
    for k in 0..100u64 {
        let (lambda, mu) = (grid[(k % 5) as usize], grid[((k / 5) % 5) as usize]);
        let (rho, sigma) = pair(2 + (k % 2) as usize, 3000 + k);
        let f = bases[(k / 25) as usize].clone();
        let lhs = skew_divergence(&f, lambda, mu, &rho, &sigma, REL).unwrap();
        let rhs = d_f_integral(&ConvexFunction::skew(f, lambda, mu).unwrap(), &rho, &sigma, REL).unwrap();
        if !agree(&lhs, &rhs) {
            skew_bad += 1;
        }
        if lambda > 0.0 && lambda < 1.0 {
            // LC_λ(ρ‖σ) = λ χ²(ρ‖m) + (1 − λ) χ²(σ‖m), m = λρ + (1 − λ)σ
            lc_n += 1;
            let lc = d_f_integral(&ConvexFunction::lecam(lambda).unwrap(), &rho, &sigma, REL).unwrap();
            let m = rho.mix(lambda, &sigma).unwrap();
            let closed = lambda * chi2_closed(&rho, &m).unwrap() + (1.0 - lambda) * chi2_closed(&sigma, &m).unwrap();
            if (lc.value - closed).abs() > lc.abs_error + fp(&[lc.value, closed]) {
                lc_bad += 1;
            }
        }
    }
    Outcome::new(skew_bad == 0 && lc_bad == 0, format!("skew: {skew_bad}/100 outside combined error; Le Cam: {lc_bad}/{lc_n}"))
}

fn c5_renyi() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut min_gap = f64::INFINITY;
    for seed in 0..100u64 {
        let (rho, sigma) = pair(2, 5000 + seed);
        for (alpha, eps) in [(0.5, 0.25), (2.0, 0.5)] {
            let d = d_alpha(&rho, &sigma, alpha, REL).unwrap();
            let tol = d.abs_error + fp(&[d.value]);
            let measured = measured_renyi_lower(&rho, &sigma, alpha, MeasurementStrategy::NsPair).unwrap();
            let geometric = geometric_renyi(&rho, &sigma, alpha).unwrap();
            min_gap = min_gap.min(d.value - measured).min(geometric - d.value);
            if measured > d.value + tol || d.value > geometric + tol {
                bad.push(format!("sandwich seed {seed} alpha {alpha}"));
            }
            if !renyi_bound_chain(&rho, &sigma, alpha, eps, REL).unwrap().holds(fp(&[d.value])) {
                bad.push(format!("chain seed {seed} alpha {alpha}"));
            }
            if alpha == 0.5 && d.value > petz_renyi(&rho, &sigma, alpha).unwrap() + 2f64.ln() / (1.0 - alpha) + tol {
                bad.push(format!("petz cap seed {seed}"));
            }
        }
    }
    // Random pairs with spectra kept off zero, so five-copy states stay above
    // the support tolerance.
    let tau = DensityMatrix::maximally_mixed(2);
    for seed in 0..20u64 {
        let (rho, sigma) = pair(2, 6000 + seed);
        let (rho, sigma) = (rho.mix(0.9, &tau).unwrap(), sigma.mix(0.9, &tau).unwrap());
        for alpha in [0.5, 2.0] {
            let tr = regularization_trace(&rho, &sigma, alpha, 5, 1e-9).unwrap();
            if tr.n_values() != vec![1, 2, 3, 4, 5] || !tr.chains_hold(fp(&[tr.per_n[0].value])) {
                bad.push(format!("regularization seed {seed} alpha {alpha}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome::new(
        bad.is_empty() && secs < 600.0,
        format!("min sandwich gap = {min_gap:.3e}, violations = {} {:?}, {secs:.1} s", bad.len(), bad.first()),
    )
}

fn c6_non_additivity() -> Outcome {
    let (rho, sigma) = non_additivity_fixture();
    let one = d_alpha(&rho, &sigma, 2.0, REL).unwrap();
    let two = d_alpha(&rho.tensor(&rho).unwrap(), &sigma.tensor(&sigma).unwrap(), 2.0, REL).unwrap();
    let gap = (two.value - 2.0 * one.value).abs();
    let err = two.abs_error + 2.0 * one.abs_error + fp(&[two.value]);
    Outcome::new(gap > 10.0 * err, format!("gap = {gap:.6e}, combined error = {err:.3e}"))
}

fn c7_depolarizing() -> Outcome {
    let tau = DensityMatrix::maximally_mixed(2);
    let mut dev_tr = 0.0f64;
    let mut dev_x2 = 0.0f64;
    for p in [0.1, 0.25, 0.5] {
        let ch = depolarizing(p, &tau).unwrap();
        dev_tr = dev_tr.max((eta_tr(&ch, &OptimizerConfig::with_seed(1)).unwrap().value - (1.0 - p)).abs());
        dev_x2 = dev_x2.max((eta_x2_local(&ch, &tau).unwrap().value - (1.0 - p) * (1.0 - p)).abs());
    }
    let fs = [ConvexFunction::kl(), ConvexFunction::js(), ConvexFunction::hellinger(2.0).unwrap(), ConvexFunction::hellinger(0.5).unwrap()];
    let mut pull_bad = 0;
    for k in 0..50u64 {
        let (rho, sigma) = pair(2 + (k % 2) as usize, 7000 + k);
        let p = 0.05 + 0.9 * unit(k, 0.2);
        let pb = depol_pullback_divergence(&fs[(k % 4) as usize], p, &sigma, &rho, REL).unwrap();
        if !pb.agree(fp(&[pb.left.value, pb.right.value])) {
            pull_bad += 1;
        }
    }
    Outcome::new(
        dev_tr <= 1e-3 && dev_x2 <= 1e-3 && pull_bad == 0,
        format!("max |eta_tr - (1-p)| = {dev_tr:.3e}, max |eta_x2 - (1-p)^2| = {dev_x2:.3e}, pullback {pull_bad}/50 outside combined error"),
    )
}

fn c8_hierarchy() -> Outcome {
    let fs = [ConvexFunction::kl(), ConvexFunction::hellinger(0.5).unwrap()];
    let mut worst_lo = f64::INFINITY;
    let mut worst_hi = f64::INFINITY;
    for seed in 0..30u64 {
        let ch = random_channel(2, 2, 2, 8000 + seed).unwrap();
        let sigma = random_density(2, 2, 8100 + seed).unwrap();
        let x2_local = eta_x2_local(&ch, &sigma).unwrap().value;
        let x2_global = eta_x2_global(&ch, 24, seed).unwrap().value;
        let tr = eta_tr(&ch, &OptimizerConfig { restarts: 8, max_iters: 300, ..OptimizerConfig::with_seed(seed) }).unwrap().value;
        for f in &fs {
            let local = eta_f_sampled(&ch, f, 24, seed, Some(&sigma), REL).unwrap().value;
            let global = eta_f_sampled(&ch, f, 24, seed, None, REL).unwrap().value;
            worst_lo = worst_lo.min(local - x2_local).min(global - x2_global);
            worst_hi = worst_hi.min(tr - global);
        }
    }
    let mut collapse = 0.0f64;
    for (p, s) in [(0.1, [0.5, 0.5]), (0.25, [0.5, 0.5]), (0.5, [0.5, 0.5]), (0.3, [0.7, 0.3]), (0.2, [0.9, 0.1])] {
        let ch = depolarizing(p, &diag(&s)).unwrap();
        let x2 = eta_x2_global(&ch, 32, 1).unwrap().value;
        for f in [ConvexFunction::kl(), ConvexFunction::hellinger(0.5).unwrap(), ConvexFunction::hellinger(1.5).unwrap(), ConvexFunction::lecam(0.3).unwrap()] {
            debug_assert!(f.operator_convex());
            collapse = collapse.max((eta_f_sampled(&ch, &f, 32, 1, None, REL).unwrap().value - x2).abs());
        }
    }
    Outcome::new(
        worst_lo >= -2e-3 && worst_hi >= -2e-3 && collapse <= 5e-3,
        format!("min(eta_f - eta_x2) = {worst_lo:.3e}, min(eta_tr - eta_f) = {worst_hi:.3e}, max collapse dev = {collapse:.3e}"),
    )
}

fn c9_reverse_pinsker() -> Outcome {
    let mut eq_slack = 0.0f64;
    for k in 0..100u64 {
        let u = random_unitary(2, k);
        let (rho, sigma) = (diag(&simplex(2 * k + 900, 2)).conjugate(&u), diag(&simplex(2 * k + 901, 2)).conjugate(&u));
        let sharp = reverse_pinsker_kl(&rho, &sigma).unwrap().sharp;
        eq_slack = eq_slack.max(sharp.slack.abs());
    }
    let mut reports = Vec::new();
    let mut bad = 0;
    for k in 0..500u64 {
        let d = 2 + (k % 2) as usize;
        // every fifth pair is rank deficient so the infinite branches run too
        let (ra, rb) = if k % 5 == 4 { (1 + (k / 5 % d as u64) as usize, d) } else { (d, d) };
        let rho = random_density(d, ra, 2 * k + 11_000).unwrap();
        let sigma = random_density(d, rb, 2 * k + 11_001).unwrap();
        let alpha = [0.5, 1.5, 2.0, 3.0][(k % 4) as usize];
        let mut batch = Vec::new();
        for f in [ConvexFunction::kl(), ConvexFunction::js(), ConvexFunction::hellinger(alpha).unwrap()] {
            let (a, b) = reverse_pinsker_f(&f, &rho, &sigma, REL).unwrap();
            batch.extend([a, b]);
        }
        batch.extend(reverse_pinsker_kl(&rho, &sigma).unwrap().all().into_iter().cloned());
        let (h, r) = reverse_pinsker_hellinger(&rho, &sigma, alpha, REL).unwrap();
        batch.extend([h, r, fvdg_improved(&rho, &sigma).unwrap(), fvdg_previous(&rho, &sigma).unwrap()]);
        bad += batch.iter().filter(|r| !r.holds(1.0)).count();
        reports.extend(batch);
    }
    let mut orth = 0.0f64;
    for seed in 0..20u64 {
        let d = 2 + (seed % 2) as usize;
        let psi = random_pure(d, seed).unwrap();
        let phi: Vec<C64> = psi.op().eigh().unwrap().vectors.column(0);
        orth = orth.max(fvdg_improved(&psi, &DensityMatrix::pure(&phi).unwrap()).unwrap().slack.abs());
    }
    Outcome::new(
        eq_slack <= 1e-5 && bad == 0 && orth <= 1e-10,
        format!(
            "commuting sharp slack max = {eq_slack:.3e}; {} reports, {bad} negative beyond error, min slack = {:.3e}; orthogonal FvdG |slack| = {orth:.3e}",
            reports.len(),
            worst(&reports)
        ),
    )
}

fn c10_continuity() -> Outcome {
    let mut reports = Vec::new();
    let mut names = std::collections::BTreeSet::new();
    for k in 0..500u64 {
        let d = 2 + (k % 2) as usize;
        let (rho, sigma) = pair(d, 20_000 + k);
        let tau = random_density(d, d, 90_000 + k).unwrap();
        let alpha = [0.5, 1.5, 2.0, 3.0][(k % 4) as usize];
        for f in [ConvexFunction::kl(), ConvexFunction::js(), ConvexFunction::hellinger(alpha).unwrap(), ConvexFunction::chi2()] {
            reports.extend(continuity_first_arg(&f, &rho, &tau, &sigma, REL).unwrap());
        }
        reports.push(entropy_continuity(&rho, &sigma).unwrap());
    }
    names.extend(reports.iter().map(|r| r.bound_name));
    let bad = reports.iter().filter(|r| !r.holds(1.0)).count();
    let covered = names.contains("continuity_kl_omega") && names.contains("entropy_continuity");
    Outcome::new(
        bad == 0 && covered,
        format!("{} reports over {} bound kinds, {bad} negative beyond error, min slack = {:.3e}", reports.len(), names.len(), worst(&reports)),
    )
}

fn c11_dp() -> Outcome {
    let mut disagree = 0;
    for k in 0..200u64 {
        let ch = random_channel(2, 2, 2, 30_000 + k).unwrap();
        let nb = NeighborSet::new(vec![(random_density(2, 2, 2 * k + 40_000).unwrap(), random_density(2, 2, 2 * k + 40_001).unwrap())]).unwrap();
        let eps = 4.0 * unit(k, 0.5);
        if !check_dp(&ch, &nb, eps, 0.0).unwrap().dmax.unwrap().agrees {
            disagree += 1;
        }
    }
    let zero = DensityMatrix::pure(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
    let one = DensityMatrix::pure(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]).unwrap();
    let basis = NeighborSet::new(vec![(zero.clone(), one.clone())]).unwrap();
    let tau = DensityMatrix::maximally_mixed(2);
    let mut boundary_bad = 0;
    for k in 0..50u64 {
        let p = 0.01 + 0.98 * unit(k, 0.1);
        let eps = 3.0 * unit(k, 0.7);
        let ch = depolarizing(p, &tau).unwrap();
        let delta = depolarizing_qubit_delta(p, eps);
        let above = check_dp(&ch, &basis, eps, (delta + 1e-9).min(1.0)).unwrap().passes;
        let below = delta > 1e-9 && check_dp(&ch, &basis, eps, delta - 1e-9).unwrap().passes;
        if !above || below {
            boundary_bad += 1;
        }
    }
    let mut ldp = Vec::new();
    for k in 0..20u64 {
        let p = 0.05 + 0.9 * unit(k, 0.3);
        let ch = depolarizing(p, &tau).unwrap();
        let eps = ((2.0 - p) / p).ln();
        let mut samples: Vec<DensityMatrix> = (0..6).map(|s| random_pure(2, 50_000 + 7 * k + s).unwrap()).collect();
        samples.extend([zero.clone(), one.clone()]);
        let (rho, sigma) = pair(2, 60_000 + k);
        for f in [ConvexFunction::kl(), ConvexFunction::hellinger(0.5).unwrap()] {
            ldp.push(ldp_divergence_bound(&f, &ch, &rho, &sigma, eps, 0.0, &samples, REL).unwrap().report);
        }
    }
    let ldp_bad = ldp.iter().filter(|r| !r.holds(1.0)).count();
    Outcome::new(
        disagree == 0 && boundary_bad == 0 && ldp_bad == 0,
        format!("criteria disagree on {disagree}/200; boundary misses {boundary_bad}/50; LDP min slack = {:.3e} ({ldp_bad} negative)", worst(&ldp)),
    )
}

fn c12_amortized() -> Outcome {
    let mut reports = Vec::new();
    for k in 0..20u64 {
        let m = random_channel(2, 2, 2, 70_000 + 2 * k).unwrap();
        let n = random_channel(2, 2, 2, 70_001 + 2 * k).unwrap();
        let cfg = AmortizedConfig { optimizer: OptimizerConfig { restarts: 8, ..OptimizerConfig::with_seed(k) }, ..AmortizedConfig::default() };
        for f in [ConvexFunction::js(), ConvexFunction::hellinger(0.5).unwrap()] {
            reports.push(amortized_bound(&f, &m, &n, &cfg).unwrap().report);
        }
    }
    let bad = reports.iter().filter(|r| !r.holds(1.0)).count();
    Outcome::new(bad == 0, format!("{} reports, {bad} negative beyond error, min slack = {:.3e}", reports.len(), worst(&reports)))
}

fn sweep(kind: SweepKind, grid: &str, states: Option<(PathBuf, PathBuf)>, columns: &[&str]) -> Table {
    let (rho, sigma) = match states {
        Some((r, s)) => (Some(r), Some(s)),
        None => (None, None),
    };
    let args = SweepArgs {
        sweep: kind,
        grid: grid.into(),
        rho,
        sigma,
        family: Family::Fig2Left,
        columns: columns.iter().map(|c| c.to_string()).collect(),
        tol: REL,
    };
    sweep_table(&args).unwrap()
}

fn col(t: &Table, name: &str) -> Vec<Option<f64>> {
    t.column(name).unwrap_or_else(|| panic!("missing column {name}"))
}

fn c13_figures() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let (rho, sigma) = figure_one_states();
    let files = (dir.join("rho.json"), dir.join("sigma.json"));
    save_state(&files.0, &rho).unwrap();
    save_state(&files.1, &sigma).unwrap();
    let columns = ["D_alpha", "D_alpha_abs_error", "petz", "sandwiched", "geometric", "measured_lb", "D"];

    let start = Instant::now();
    let t = sweep(SweepKind::Alpha, "0.1:3:30", Some(files.clone()), &columns);
    let (d, err, petz, sand, geo, meas) =
        (col(&t, "D_alpha"), col(&t, "D_alpha_abs_error"), col(&t, "petz"), col(&t, "sandwiched"), col(&t, "geometric"), col(&t, "measured_lb"));
    let mut order_bad = 0;
    for i in 0..t.rows.len() {
        let v = d[i].expect("D_alpha defined on the whole grid");
        let tol = err[i].unwrap_or(0.0) + fp(&[v]);
        let below = |x: Option<f64>, y: Option<f64>, tol: f64| match (x, y) {
            (Some(x), Some(y)) => x <= y + tol,
            _ => true,
        };
        if !below(meas[i], Some(v), tol) || !below(Some(v), geo[i], tol) || !below(sand[i], petz[i], fp(&[petz[i].unwrap_or(0.0)])) {
            order_bad += 1;
        }
    }
    let fig1_secs = start.elapsed().as_secs_f64();
    let orderings = order_bad == 0 && t.rows.len() == 30 && fig1_secs < 300.0;

    let near = sweep(SweepKind::Alpha, "0.9999:1.0001:3", Some(files), &columns);
    let alphas = col(&near, "alpha");
    let reference = col(&near, "D");
    let mut limit_dev = 0.0f64;
    let mut per_curve = Vec::new();
    for name in ["D_alpha", "petz", "sandwiched", "geometric"] {
        let c = col(&near, name);
        let mut dev = 0.0f64;
        for i in 0..near.rows.len() {
            if alphas[i] != Some(1.0) {
                dev = dev.max((c[i].unwrap() - reference[i].unwrap()).abs());
            }
        }
        limit_dev = limit_dev.max(dev);
        per_curve.push(format!("{name} {dev:.2e}"));
    }
    let limit = limit_dev <= 1e-6;

    let start = Instant::now();
    let fig2 = sweep(SweepKind::P, "0:1:21", None, &["D", "NewRevPin0"]);
    let (dd, nrp) = (col(&fig2, "D"), col(&fig2, "NewRevPin0"));
    let fig2_dev = (0..fig2.rows.len()).map(|i| (dd[i].unwrap() - nrp[i].unwrap()).abs()).fold(0.0f64, f64::max);
    let fig2_secs = start.elapsed().as_secs_f64();
    let fig2_ok = fig2_dev <= 1e-5 && fig2.rows.len() == 21 && fig2_secs < 300.0;

    let tag = |ok: bool| if ok { "ok" } else { "FAIL" };
    Outcome::new(
        orderings && limit && fig2_ok,
        format!(
            "alpha grid orderings [{}]: {order_bad}/30 rows violated, {fig1_secs:.1} s; alpha = 1 +- 1e-4 [{}]: max dev from D = {limit_dev:.3e} ({}); \
             p grid [{}]: max |NewRevPin0 - D| = {fig2_dev:.3e}, {fig2_secs:.1} s",
            tag(orderings),
            tag(limit),
            per_curve.join(", "),
            tag(fig2_ok)
        ),
    )
}

fn c14_scaling() -> Outcome {
    let (mut kl_bad, mut h_bad) = (0, 0);
    let mut worst_ratio = 0.0f64;
    for k in 0..50u64 {
        // (a, b) ∈ (0, 3]²
        let (a, b) = (3.0 * (1.0 - unit(k, 0.05)), 3.0 * (1.0 - unit(k, 0.55)));
        let (rho, sigma) = pair(2 + (k % 2) as usize, 80_000 + k);
        let (x, y) = (rho.op().scale(a), sigma.op().scale(b));
        let base = d_f_integral(&ConvexFunction::kl(), &rho, &sigma, REL).unwrap();
        let gen = d_f_generalized(&ConvexFunction::kl(), &x, &y, REL).unwrap();
        let expect = a * base.value + a * (a / b).ln();
        let err = gen.abs_error + a * base.abs_error + fp(&[gen.value, expect]);
        worst_ratio = worst_ratio.max((gen.value - expect).abs() / err);
        if (gen.value - expect).abs() > err {
            kl_bad += 1;
        }
        let alpha = [0.5, 1.5, 2.0, 3.0][(k % 4) as usize];
        let f = ConvexFunction::hellinger(alpha).unwrap();
        let h = d_f_integral(&f, &rho, &sigma, REL).unwrap();
        let hg = d_f_generalized(&f, &x, &y, REL).unwrap();
        let c = a.powf(alpha) * b.powf(1.0 - alpha);
        let expect = (c - a) / (alpha - 1.0) + c * h.value;
        let err = hg.abs_error + c * h.abs_error + fp(&[hg.value, expect]);
        worst_ratio = worst_ratio.max((hg.value - expect).abs() / err);
        if (hg.value - expect).abs() > err {
            h_bad += 1;
        }
    }
    Outcome::new(
        kl_bad == 0 && h_bad == 0,
        format!("relative entropy {kl_bad}/50 and Hellinger {h_bad}/50 outside combined error, max |diff|/error = {worst_ratio:.3}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("Umegaki identity", c1_umegaki),
        ("chi2 identity and local limit", c2_chi2),
        ("classical reduction", c3_classical),
        ("skew and Le Cam identities", c4_skew_lecam),
        ("Renyi sandwich", c5_renyi),
        ("non-additivity witness", c6_non_additivity),
        ("depolarizing closed forms", c7_depolarizing),
        ("contraction hierarchy", c8_hierarchy),
        ("reverse Pinsker", c9_reverse_pinsker),
        ("continuity bounds", c10_continuity),
        ("differential privacy", c11_dp),
        ("amortized bounds", c12_amortized),
        ("figure reproduction", c13_figures),
        ("scaling", c14_scaling),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failed += 1;
        }
        println!("{status} {:>2} {name}: {} [{:.1} s]", i + 1, outcome.detail, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
