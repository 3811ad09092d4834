use std::io::Write;

use qfdiv::bounds::reverse_pinsker_kl;
use qfdiv::fdiv::umegaki;
use qfdiv::hockey::{e_gamma, trace_distance};
use qfdiv::renyi::{
    belavkin_staszewski, d_alpha, geometric_renyi, h_alpha, measured_renyi_lower, petz_renyi, sandwiched_renyi, MeasurementStrategy,
};
use qfdiv::DensityMatrix;

use super::check_tol;
use crate::args::{Family, SweepArgs, SweepKind};
use crate::csv::{Cell, Table};
use crate::error::{CliError, CliResult};
use crate::io::load_state;

const ALPHA_COLUMNS: &[&str] = &["H_alpha", "D_alpha", "D_alpha_abs_error", "petz", "sandwiched", "geometric", "measured_lb", "D"];
const ALPHA_DEFAULT: &[&str] = &["D_alpha", "petz", "sandwiched", "geometric"];
const GAMMA_COLUMNS: &[&str] = &["E_gamma", "E_gamma_rev"];
const P_COLUMNS: &[&str] = &["D", "Pinsker", "NewRevPin0", "NewRevPin1", "Thompson", "Omega", "Eq1bound", "trace"];
const P_DEFAULT: &[&str] = &["D", "NewRevPin0", "Thompson", "Eq1bound"];

/// `start:stop:steps` with both endpoints included. Points are rounded to 12
/// significant digits so that decimal grids hit their nominal values
/// (`0.1:3:30` contains exactly `1.0`).
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Usage(format!("grid `{spec}` is not start:stop:steps"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, steps] = parts[..] else { return Err(bad()) };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if steps == 0 {
        return Err(CliError::Usage("empty grid".into()));
    }
    if steps == 1 {
        return Ok(vec![start]);
    }
    let h = (stop - start) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| if i + 1 == steps { stop } else { round12(start + h * i as f64) })
        .collect())
}

fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float")
}

/// Out-of-domain results become empty cells; numerical failures propagate.
fn cell(r: qfdiv::Result<f64>) -> CliResult<Cell> {
    match r {
        Ok(v) if v.is_nan() => Ok(None),
        Ok(v) => Ok(Some(v)),
        Err(qfdiv::Error::Domain(_) | qfdiv::Error::Support(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn select(requested: &[String], valid: &[&str], default: &[&str]) -> CliResult<Vec<String>> {
    if requested.is_empty() {
        return Ok(default.iter().map(|s| s.to_string()).collect());
    }
    for c in requested {
        if !valid.contains(&c.as_str()) {
            return Err(CliError::Usage(format!("unknown column `{c}`; valid columns: {}", valid.join(", "))));
        }
    }
    Ok(requested.to_vec())
}

fn require(path: &Option<std::path::PathBuf>, flag: &str) -> CliResult<DensityMatrix> {
    match path {
        Some(p) => load_state(p),
        None => Err(CliError::Usage(format!("--{flag} is required for this sweep"))),
    }
}

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> CliResult<()> {
    if rho.dim() != sigma.dim() {
        return Err(qfdiv::Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() }.into());
    }
    Ok(())
}

fn alpha_cell(name: &str, rho: &DensityMatrix, sigma: &DensityMatrix, a: f64, tol: f64) -> CliResult<Cell> {
    let at_one = a == 1.0;
    match name {
        "H_alpha" if at_one => cell(umegaki(rho, sigma)),
        "H_alpha" => cell(h_alpha(rho, sigma, a, tol).map(|v| v.value)),
        "D_alpha" | "petz" | "sandwiched" | "D" if at_one => cell(umegaki(rho, sigma)),
        "D_alpha" => cell(d_alpha(rho, sigma, a, tol).map(|v| v.value)),
        "D_alpha_abs_error" if at_one => Ok(Some(0.0)),
        "D_alpha_abs_error" => cell(d_alpha(rho, sigma, a, tol).map(|v| v.abs_error)),
        "petz" => cell(petz_renyi(rho, sigma, a)),
        "sandwiched" => cell(sandwiched_renyi(rho, sigma, a)),
        "geometric" if at_one => cell(belavkin_staszewski(rho, sigma)),
        "geometric" => cell(geometric_renyi(rho, sigma, a)),
        "measured_lb" if at_one => Ok(None),
        "measured_lb" => cell(measured_renyi_lower(rho, sigma, a, MeasurementStrategy::NsPair)),
        "D" => cell(umegaki(rho, sigma)),
        _ => unreachable!("validated column"),
    }
}

/// `(λ_min(σ) + E₁) ln(1 + E₁/λ_min(σ)) − λ_min(ρ) ln(1 + E₁/λ_min(ρ))`, the
/// earlier eigenvalue-based reverse Pinsker bound on `D(ρ‖σ)`.
pub fn eigenvalue_reverse_pinsker(rho: &DensityMatrix, sigma: &DensityMatrix) -> qfdiv::Result<f64> {
    let e1 = trace_distance(rho, sigma)?;
    let ls = sigma.eigvalsh()?[0].max(0.0);
    let lr = rho.eigvalsh()?[0].max(0.0);
    if ls == 0.0 {
        return Ok(if e1 == 0.0 { 0.0 } else { f64::INFINITY });
    }
    let term = |l: f64| if l == 0.0 { 0.0 } else { l * (e1 / l).ln_1p() };
    Ok((ls + e1) * (e1 / ls).ln_1p() - term(lr))
}

fn p_row(columns: &[String], rho: &DensityMatrix, sigma: &DensityMatrix) -> CliResult<Vec<Cell>> {
    let rp = reverse_pinsker_kl(rho, sigma)?;
    columns
        .iter()
        .map(|c| match c.as_str() {
            "D" => cell(umegaki(rho, sigma)),
            "Pinsker" => cell(trace_distance(rho, sigma).map(|e| 2.0 * e * e)),
            "NewRevPin0" => Ok(Some(rp.sharp.rhs)),
            "NewRevPin1" => Ok(Some(rp.linear.rhs)),
            "Thompson" => Ok(Some(rp.thompson.rhs)),
            "Omega" => Ok(Some(rp.omega.rhs)),
            "Eq1bound" => cell(eigenvalue_reverse_pinsker(rho, sigma)),
            "trace" => cell(trace_distance(rho, sigma)),
            _ => unreachable!("validated column"),
        })
        .collect()
}

pub fn sweep_table(args: &SweepArgs) -> CliResult<Table> {
    check_tol(args.tol)?;
    let grid = parse_grid(&args.grid)?;
    match args.sweep {
        SweepKind::Alpha => {
            let columns = select(&args.columns, ALPHA_COLUMNS, ALPHA_DEFAULT)?;
            let (rho, sigma) = (require(&args.rho, "rho")?, require(&args.sigma, "sigma")?);
            same_dim(&rho, &sigma)?;
            if let Some(a) = grid.iter().find(|&&a| !(a > 0.0)) {
                return Err(CliError::Usage(format!("α = {a} must be positive")));
            }
            let mut table = Table::new(header("alpha", &columns));
            for &a in &grid {
                let mut row = vec![Some(a)];
                for c in &columns {
                    row.push(alpha_cell(c, &rho, &sigma, a, args.tol)?);
                }
                table.push(row);
            }
            Ok(table)
        }
        SweepKind::Gamma => {
            let columns = select(&args.columns, GAMMA_COLUMNS, GAMMA_COLUMNS)?;
            let (rho, sigma) = (require(&args.rho, "rho")?, require(&args.sigma, "sigma")?);
            same_dim(&rho, &sigma)?;
            let mut table = Table::new(header("gamma", &columns));
            for &g in &grid {
                let mut row = vec![Some(g)];
                for c in &columns {
                    row.push(match c.as_str() {
                        "E_gamma" => cell(e_gamma(&rho, &sigma, g))?,
                        _ => cell(e_gamma(&sigma, &rho, g))?,
                    });
                }
                table.push(row);
            }
            Ok(table)
        }
        SweepKind::P => {
            let columns = select(&args.columns, P_COLUMNS, P_DEFAULT)?;
            if let Some(p) = grid.iter().find(|&&p| !(0.0..=1.0).contains(&p)) {
                return Err(CliError::Usage(format!("p = {p} outside [0, 1]")));
            }
            let sigma = match (&args.sigma, args.family) {
                (None, Family::Fig2Left) => DensityMatrix::from_real_diagonal(&[0.1, 0.9])?,
                (s, _) => require(s, "sigma")?,
            };
            let base = match args.family {
                Family::Fig2Left => {
                    if sigma.dim() != 2 {
                        return Err(CliError::Usage("the fig2-left family is a qubit family".into()));
                    }
                    None
                }
                Family::Depolarizing => Some(require(&args.rho, "rho")?),
            };
            if let Some(rho) = &base {
                same_dim(rho, &sigma)?;
            }
            let mut table = Table::new(header("p", &columns));
            for &p in &grid {
                let rho = match &base {
                    None => DensityMatrix::from_real_diagonal(&[p * p, 1.0 - p * p])?,
                    Some(r) => r.mix(1.0 - p, &sigma)?,
                };
                let mut row = vec![Some(p)];
                row.extend(p_row(&columns, &rho, &sigma)?);
                table.push(row);
            }
            Ok(table)
        }
    }
}

fn header(var: &str, columns: &[String]) -> Vec<String> {
    std::iter::once(var.to_string()).chain(columns.iter().cloned()).collect()
}

pub fn sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult<i32> {
    let table = sweep_table(args)?;
    out.write_all(table.render().as_bytes())?;
    Ok(0)
}
