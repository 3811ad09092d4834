//! Closed forms and identities used as comparators for the integral engine.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use super::{d_f_integral, geometry, ConvexFunction, DivergenceValue, SupportFlag};
use crate::hockey::pencil;
use crate::linalg::pseudo_inverse_sqrt;
use crate::states::{check_same_dim, DensityMatrix};
use crate::{Error, Result};

/// Default mixing grid for [`local_chi2_limit`].
pub const DEFAULT_LAMBDAS: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

/// Umegaki relative entropy `Tr ρ(ln ρ − ln σ)`, `+∞` when
/// `supp ρ ⊄ supp σ`.
pub fn umegaki(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    if !pencil(rho.op(), sigma.op())?.contained {
        return Ok(f64::INFINITY);
    }
    let neg_entropy: f64 = rho.eigvalsh()?.iter().filter(|&&r| r > 0.0).map(|&r| r * r.ln()).sum();
    let s = sigma.op().eigh()?;
    let cut = s.support_threshold();
    let rotated = rho.op().matrix().matmul(&s.vectors);
    let mut cross = 0.0;
    for (j, &l) in s.values.iter().enumerate() {
        if l <= cut {
            continue;
        }
        // ⟨u_j|ρ|u_j⟩
        let w: f64 = (0..s.dim()).map(|i| (s.vectors[(i, j)].conj() * rotated[(i, j)]).re).sum();
        cross += w * l.ln();
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// `1/L(a, b)` with `L` the logarithmic mean, `ln(a/b)/(a − b)`.
pub(crate) fn inv_log_mean(a: f64, b: f64) -> f64 {
    let r = (a - b) / b;
    if r.abs() < 1e-4 {
        (1.0 - r / 2.0 + r * r / 3.0 - r * r * r / 4.0) / b
    } else {
        r.ln_1p() / (a - b)
    }
}

/// `χ²(ρ‖σ) = Σ_ij |⟨i|ρ|j⟩|² ln(λ_i/λ_j)/(λ_i − λ_j) − 1` in the eigenbasis
/// of `σ`; `+∞` when `supp ρ ⊄ supp σ`.
pub fn chi2_closed(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    if !pencil(rho.op(), sigma.op())?.contained {
        return Ok(f64::INFINITY);
    }
    let s = sigma.op().eigh()?;
    let cut = s.support_threshold();
    let r = s.vectors.adjoint().matmul(rho.op().matrix()).matmul(&s.vectors);
    let n = s.dim();
    let mut acc = 0.0;
    for i in 0..n {
        if s.values[i] <= cut {
            continue;
        }
        for j in 0..n {
            if s.values[j] <= cut {
                continue;
            }
            acc += r[(i, j)].norm_sqr() * inv_log_mean(s.values[i], s.values[j]);
        }
    }
    Ok((acc - 1.0).max(0.0))
}

/// Classical `Σ_x Q(x) f(P(x)/Q(x))` with `0 f(0/0) = 0` and
/// `Q(x) = 0 < P(x)` contributing `P(x) lim_{t→∞} f(t)/t`.
pub fn classical_f_div(p: &[f64], q: &[f64], f: &ConvexFunction) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    if p.iter().chain(q).any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::Domain("probabilities must be finite and non-negative".into()));
    }
    let mut acc = 0.0;
    for (&px, &qx) in p.iter().zip(q) {
        acc += match (px > 0.0, qx > 0.0) {
            (true, true) => qx * f.eval(px / qx),
            (true, false) => px * f.slope_at_infinity(),
            (false, true) => qx * f.at_zero(),
            (false, false) => 0.0,
        };
    }
    Ok(acc)
}

/// `[f(x) − x f'(x)]_{x = e^{−D_max(σ‖ρ)}} + f'(e^{D_max(ρ‖σ)})`, with the
/// boundary limits of `f` when a `D_max` is infinite.
pub fn d_f_upper_bound(f: &ConvexFunction, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let geo = geometry(rho.op(), sigma.op())?;
    let low = if geo.bwd.contained {
        let x = 1.0 / geo.bwd.endpoint();
        f.eval(x) - x * f.deriv(x)
    } else {
        f.conjugate_at_zero()
    };
    let high = if geo.fwd.contained { f.deriv(geo.fwd.endpoint()) } else { f.slope_at_infinity() };
    Ok(low + high)
}

/// Polynomial extrapolation of `(x_k, y_k)` to `x = 0` (Neville).
fn extrapolate_to_zero(x: &[f64], y: &[f64]) -> f64 {
    let mut p: Vec<f64> = y.to_vec();
    let n = x.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
        }
    }
    p[0]
}

/// Largest `λ·r` on the mixing grid, `r` the spectral radius of
/// `σ^{-1/2}(ρ − σ)σ^{-1/2}`.
const LOCAL_RADIUS: f64 = 0.25;

/// Richardson limit of `(2/λ²) D_f(λρ + (1 − λ)σ‖σ)` as `λ → 0`, which is
/// `f''(1) χ²(ρ‖σ)`.
///
/// The grid is scaled down when needed so its largest point satisfies
/// `λ·r ≤ 1/4`; beyond the radius `1/r` the expansion in `λ` diverges and the
/// extrapolation is meaningless.
pub fn local_chi2_limit(f: &ConvexFunction, rho: &DensityMatrix, sigma: &DensityMatrix, lambdas: &[f64], rel_tol: f64) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    let c = f.second_at_one();
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("f''(1) = {c} must be positive and finite")));
    }
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0 && l <= 1.0)) {
        return Err(Error::Domain("mixing weights must lie in (0, 1]".into()));
    }
    if lambdas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Domain("mixing weights must be strictly decreasing".into()));
    }
    if geometry(rho.op(), sigma.op())?.flag != SupportFlag::Full {
        return Err(Error::Support("local expansion needs equal supports".into()));
    }
    let inv_sqrt = pseudo_inverse_sqrt(sigma.op())?;
    let r = rho.op().sub(sigma.op()).congruence(inv_sqrt.matrix()).eigvalsh()?.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let scale = if r * lambdas[0] > LOCAL_RADIUS { LOCAL_RADIUS / (r * lambdas[0]) } else { 1.0 };
    let lambdas: Vec<f64> = lambdas.iter().map(|l| l * scale).collect();
    let mut vals = Vec::with_capacity(lambdas.len());
    for &l in &lambdas {
        let mixed = rho.mix(l, sigma)?;
        let d = d_f_integral(f, &mixed, sigma, rel_tol)?;
        vals.push(2.0 * d.value / (l * l));
    }
    Ok(extrapolate_to_zero(&lambdas, &vals))
}

/// `(1 − μ) D_f(ρ‖λρ + (1 − λ)σ) + μ D_f(σ‖λρ + (1 − λ)σ)`, evaluated on the
/// mixed states.
pub fn skew_divergence(
    f: &ConvexFunction,
    lambda: f64,
    mu: f64,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    rel_tol: f64,
) -> Result<DivergenceValue> {
    check_same_dim(rho, sigma)?;
    for (name, v) in [("lambda", lambda), ("mu", mu)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain(format!("{name} = {v} must lie in [0, 1]")));
        }
    }
    let flag = geometry(rho.op(), sigma.op())?.flag;
    let mixed = rho.mix(lambda, sigma)?;
    let mut out = DivergenceValue { value: 0.0, abs_error: 0.0, support_flag: flag };
    for (w, x) in [(1.0 - mu, rho), (mu, sigma)] {
        if w == 0.0 {
            continue;
        }
        let d = d_f_integral(f, x, &mixed, rel_tol)?;
        if !d.is_finite() {
            return Ok(DivergenceValue { value: f64::INFINITY, abs_error: 0.0, support_flag: flag });
        }
        out.value += w * d.value;
        out.abs_error += w * d.abs_error;
    }
    Ok(out)
}
