//! Quantum f-divergences from the hockey-stick integral
//!
//! `D_f(ρ‖σ) = ∫₁^∞ f''(γ) E_γ(ρ‖σ) + γ⁻³ f''(1/γ) E_γ(σ‖ρ) dγ`.
//!
//! Each half is integrated in `t = ln γ` up to `e^{D_max}` of its ordering,
//! with panel boundaries at the generalized eigenvalues of the pair, which are
//! exactly the points where `γ ↦ E_γ` has kinks. When the support condition
//! fails the integrand tends to the weight of the first argument outside the
//! support of the second, and the remainder of the integral is added
//! analytically from the registry's boundary limits.

mod closed;
mod registry;

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

pub use closed::{chi2_closed, classical_f_div, d_f_upper_bound, local_chi2_limit, skew_divergence, umegaki, DEFAULT_LAMBDAS};
pub(crate) use closed::inv_log_mean;
pub use registry::{ConvexFunction, VALID_SPECS};

use crate::hockey::{degroot_info, e_gamma_raw, pencil, positive_part_raw, KernelSplit, Pencil};
use crate::linalg::HermitianOperator;
use crate::quad::{integrate, Tolerance};
use crate::states::{check_same_dim, DensityMatrix};
use crate::{Error, Result};

/// Absolute error floor for the quadrature, below which a result is accepted
/// regardless of the relative tolerance.
pub const ABS_FLOOR: f64 = 1e-15;

/// Largest `ln γ` reached when the integrand has an infinite support.
const MAX_LOG_GAMMA: f64 = 700.0;

/// Relative position of the supports of the two arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportFlag {
    /// Equal supports.
    Full,
    /// `supp ρ ⊊ supp σ`.
    FirstInSecond,
    /// `ρ ⊥ σ`.
    Disjoint,
    Other,
}

impl SupportFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            SupportFlag::Full => "full",
            SupportFlag::FirstInSecond => "first_in_second",
            SupportFlag::Disjoint => "disjoint",
            SupportFlag::Other => "other",
        }
    }
}

/// A divergence with the quadrature error estimate. Infinite values carry
/// `abs_error = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceValue {
    pub value: f64,
    pub abs_error: f64,
    pub support_flag: SupportFlag,
}

impl DivergenceValue {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn infinite(support_flag: SupportFlag) -> Self {
        DivergenceValue { value: f64::INFINITY, abs_error: 0.0, support_flag }
    }
}

pub(crate) struct Geometry {
    pub fwd: Pencil,
    pub bwd: Pencil,
    pub flag: SupportFlag,
}

pub(crate) fn geometry(a: &HermitianOperator, b: &HermitianOperator) -> Result<Geometry> {
    let fwd = pencil(a, b)?;
    let bwd = pencil(b, a)?;
    let flag = if fwd.contained && bwd.contained {
        SupportFlag::Full
    } else if fwd.contained {
        SupportFlag::FirstInSecond
    } else {
        let overlap = a.matrix().matmul(b.matrix()).trace().re.abs();
        if overlap <= 1e-12 * a.trace() * b.trace() {
            SupportFlag::Disjoint
        } else {
            SupportFlag::Other
        }
    };
    Ok(Geometry { fwd, bwd, flag })
}

/// Relative position of `supp ρ` and `supp σ`.
pub fn support_flag(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<SupportFlag> {
    check_same_dim(rho, sigma)?;
    Ok(geometry(rho.op(), sigma.op())?.flag)
}

/// Candidate kinks of `γ ↦ Tr(A − γB)_+`, taken from whichever pencil is
/// available.
fn kinks(primary: &Pencil, reverse: &Pencil) -> Vec<f64> {
    if primary.contained {
        primary.ratios.clone()
    } else if reverse.contained {
        reverse.ratios.iter().filter(|&&r| r > 0.0).map(|r| 1.0 / r).collect()
    } else {
        Vec::new()
    }
}

fn log_points(hi: f64, kinks: &[f64]) -> Vec<f64> {
    let th = hi.ln();
    let mut inner: Vec<f64> = kinks.iter().filter(|&&k| k > 1.0 && k < hi).map(|k| k.ln()).collect();
    inner.sort_by(|x, y| x.total_cmp(y));
    let mut pts = vec![0.0];
    for t in inner {
        if t - pts[pts.len() - 1] > 1e-10 && th - t > 1e-10 {
            pts.push(t);
        }
    }
    pts.push(th);
    pts
}

/// One half of the representation: `∫₁^∞ w(γ) H(γ) dγ`, where `H` vanishes
/// beyond the pencil endpoint and tends to its kernel mass otherwise, and
/// `tail(Γ) = ∫_Γ^∞ w`.
struct Half<'a> {
    weight: &'a dyn Fn(f64) -> f64,
    tail: &'a dyn Fn(f64) -> f64,
    hockey: &'a dyn Fn(f64) -> Result<f64>,
    pencil: &'a Pencil,
    kinks: &'a [f64],
    /// `d · max(Tr A, Tr B)`, the scale of the eigenvalue roundoff.
    scale: f64,
    /// γ from which `hockey` uses the kernel split, whose error no longer
    /// grows with γ.
    exact_from: f64,
}

impl Half<'_> {
    fn roundoff(&self, g: f64) -> f64 {
        roundoff(self.scale, g.min(self.exact_from))
    }
}

fn split_for(p: &Pencil, a: &HermitianOperator, b: &HermitianOperator) -> Result<Option<KernelSplit>> {
    if p.contained {
        Ok(None)
    } else {
        KernelSplit::new(a, b)
    }
}

fn exact_from(split: &Option<KernelSplit>) -> f64 {
    split.as_ref().map_or(f64::INFINITY, |s| s.threshold)
}

/// Roundoff in `H(γ)`: eigenvalues of `A − γB` carry an absolute error of a
/// few ulps of `‖A‖ + γ‖B‖`.
fn roundoff(scale: f64, g: f64) -> f64 {
    16.0 * f64::EPSILON * scale * (1.0 + g)
}

/// `∫ w(e^t) e^t roundoff(e^t) dt` over `[0, t_max]` by the midpoint rule:
/// the error the integrand noise alone can cause.
fn noise_floor(half: &Half<'_>, t_max: f64) -> f64 {
    let n = (2.0 * t_max).ceil().max(1.0) as usize;
    let h = t_max / n as f64;
    (0..n)
        .map(|i| {
            let g = ((i as f64 + 0.5) * h).exp();
            (half.weight)(g) * g * half.roundoff(g) * h
        })
        .sum()
}

fn integrate_half(half: &Half<'_>, tol: Tolerance) -> Result<(f64, f64)> {
    let with_floor = |t_max: f64| Tolerance { abs: tol.abs.max(noise_floor(half, t_max)), ..tol };
    let integrand = |t: f64| -> Result<f64> {
        let g = t.exp();
        let w = (half.weight)(g);
        if w == 0.0 {
            return Ok(0.0);
        }
        Ok(w * (half.hockey)(g)? * g)
    };
    if half.pencil.contained {
        let end = half.pencil.endpoint();
        if end <= 1.0 {
            return Ok((0.0, 0.0));
        }
        let q = integrate(integrand, &log_points(end, half.kinks), with_floor(end.ln()))?;
        return Ok((q.value, q.abs_error));
    }
    let limit = half.pencil.kernel_mass;
    let tail_one = (half.tail)(1.0);
    if tail_one.is_infinite() {
        return Ok((f64::INFINITY, 0.0));
    }
    let target = (1e-3 * tol.rel * limit * tail_one).max(0.1 * tol.abs);
    // H − limit decays like 1/γ; stop once the remainder is negligible or
    // the difference is buried in roundoff.
    let mut cut = half.kinks.iter().fold(1.0f64, |m, &k| if k.is_finite() { m.max(k) } else { m }).ln() + 2.0;
    let mut remainder;
    loop {
        let g = cut.exp();
        let excess = (half.hockey)(g)? - limit;
        let noise = half.roundoff(g);
        remainder = (excess.abs() + noise) * (half.tail)(g);
        if remainder <= target || excess.abs() <= noise || cut >= MAX_LOG_GAMMA {
            break;
        }
        cut = (cut + 1.0).min(MAX_LOG_GAMMA);
    }
    let g = cut.exp();
    let q = integrate(integrand, &log_points(g, half.kinks), with_floor(cut))?;
    Ok((q.value + limit * (half.tail)(g), q.abs_error + remainder))
}

fn tolerance(rel_tol: f64) -> Result<Tolerance> {
    Ok(Tolerance::new(rel_tol)?.with_abs(ABS_FLOOR))
}

fn combine(parts: [(f64, f64); 2], flag: SupportFlag) -> DivergenceValue {
    let value = parts[0].0 + parts[1].0;
    if value.is_infinite() {
        return DivergenceValue::infinite(flag);
    }
    DivergenceValue { value, abs_error: parts[0].1 + parts[1].1, support_flag: flag }
}

fn weight_fwd(f: &ConvexFunction) -> impl Fn(f64) -> f64 + '_ {
    move |g| f.second(g)
}

fn weight_bwd(f: &ConvexFunction) -> impl Fn(f64) -> f64 + '_ {
    move |g| f.second(1.0 / g) / (g * g * g)
}

/// `D_f(ρ‖σ)` from the two-sided hockey-stick integral.
pub fn d_f_integral(f: &ConvexFunction, rho: &DensityMatrix, sigma: &DensityMatrix, rel_tol: f64) -> Result<DivergenceValue> {
    check_same_dim(rho, sigma)?;
    let tol = tolerance(rel_tol)?;
    let (a, b) = (rho.op(), sigma.op());
    let geo = geometry(a, b)?;
    let (k_fwd, k_bwd) = (kinks(&geo.fwd, &geo.bwd), kinks(&geo.bwd, &geo.fwd));
    let scale = rho.dim() as f64;
    let (sf, sb) = (split_for(&geo.fwd, a, b)?, split_for(&geo.bwd, b, a)?);
    let first = integrate_half(
        &Half {
            weight: &weight_fwd(f),
            tail: &|g| f.upper_tail(g),
            hockey: &|g| match &sf {
                Some(k) if g >= k.threshold => k.e_gamma(g),
                _ => e_gamma_raw(a, b, g),
            },
            pencil: &geo.fwd,
            kinks: &k_fwd,
            scale,
            exact_from: exact_from(&sf),
        },
        tol,
    )?;
    if first.0.is_infinite() {
        return Ok(DivergenceValue::infinite(geo.flag));
    }
    let second = integrate_half(
        &Half {
            weight: &weight_bwd(f),
            tail: &|g| f.lower_tail(g),
            hockey: &|g| match &sb {
                Some(k) if g >= k.threshold => k.e_gamma(g),
                _ => e_gamma_raw(b, a, g),
            },
            pencil: &geo.bwd,
            kinks: &k_bwd,
            scale,
            exact_from: exact_from(&sb),
        },
        tol,
    )?;
    Ok(combine([first, second], geo.flag))
}

/// `D_f(ρ‖σ) = ∫₀^∞ f''(γ) E_γ(ρ‖σ) dγ`, the part below 1 evaluated directly
/// (no argument exchange) after substituting `γ = 1/s`.
pub fn d_f_single_integral(f: &ConvexFunction, rho: &DensityMatrix, sigma: &DensityMatrix, rel_tol: f64) -> Result<DivergenceValue> {
    check_same_dim(rho, sigma)?;
    let tol = tolerance(rel_tol)?;
    let (a, b) = (rho.op(), sigma.op());
    let geo = geometry(a, b)?;
    let (k_fwd, k_bwd) = (kinks(&geo.fwd, &geo.bwd), kinks(&geo.bwd, &geo.fwd));
    let scale = rho.dim() as f64;
    let (sf, sb) = (split_for(&geo.fwd, a, b)?, split_for(&geo.bwd, b, a)?);
    let upper = integrate_half(
        &Half {
            weight: &weight_fwd(f),
            tail: &|g| f.upper_tail(g),
            hockey: &|g| match &sf {
                Some(k) if g >= k.threshold => k.e_gamma(g),
                _ => e_gamma_raw(a, b, g),
            },
            pencil: &geo.fwd,
            kinks: &k_fwd,
            scale,
            exact_from: exact_from(&sf),
        },
        tol,
    )?;
    if upper.0.is_infinite() {
        return Ok(DivergenceValue::infinite(geo.flag));
    }
    // s·E_{1/s}(ρ‖σ) = E_s(σ‖ρ); the split is used only where the direct form
    // has lost its precision
    let lower = integrate_half(
        &Half {
            weight: &weight_bwd(f),
            tail: &|s| f.lower_tail(s),
            hockey: &|s| match &sb {
                Some(k) if s >= k.threshold => k.e_gamma(s),
                _ => Ok(s * e_gamma_raw(a, b, 1.0 / s)?),
            },
            pencil: &geo.bwd,
            kinks: &k_bwd,
            scale,
            exact_from: exact_from(&sb),
        },
        tol,
    )?;
    Ok(combine([upper, lower], geo.flag))
}

/// `D_f` from deGroot statistical information,
/// `∫₀^∞ (1 + u) f''(u) 𝓘_{1/(1+u)}(ρ‖σ) du`.
pub fn d_f_degroot(f: &ConvexFunction, rho: &DensityMatrix, sigma: &DensityMatrix, rel_tol: f64) -> Result<DivergenceValue> {
    check_same_dim(rho, sigma)?;
    let tol = tolerance(rel_tol)?;
    let (a, b) = (rho.op(), sigma.op());
    let geo = geometry(a, b)?;
    let (k_fwd, k_bwd) = (kinks(&geo.fwd, &geo.bwd), kinks(&geo.bwd, &geo.fwd));
    let scale = rho.dim() as f64;
    let (sf, sb) = (split_for(&geo.fwd, a, b)?, split_for(&geo.bwd, b, a)?);
    let upper = integrate_half(
        &Half {
            weight: &weight_fwd(f),
            tail: &|g| f.upper_tail(g),
            hockey: &|u| match &sf {
                Some(k) if u >= k.threshold => k.e_gamma(u),
                _ => Ok((1.0 + u) * degroot_info(1.0 / (1.0 + u), rho, sigma)?),
            },
            pencil: &geo.fwd,
            kinks: &k_fwd,
            scale,
            exact_from: exact_from(&sf),
        },
        tol,
    )?;
    if upper.0.is_infinite() {
        return Ok(DivergenceValue::infinite(geo.flag));
    }
    // u = 1/s on (0, 1): (1 + u) f''(u) 𝓘_{1/(1+u)} du = s⁻³ f''(1/s) (1 + s) 𝓘_{s/(1+s)} ds
    let lower = integrate_half(
        &Half {
            weight: &weight_bwd(f),
            tail: &|s| f.lower_tail(s),
            hockey: &|s| match &sb {
                Some(k) if s >= k.threshold => k.e_gamma(s),
                _ => Ok((1.0 + s) * degroot_info(s / (1.0 + s), rho, sigma)?),
            },
            pencil: &geo.bwd,
            kinks: &k_bwd,
            scale,
            exact_from: exact_from(&sb),
        },
        tol,
    )?;
    Ok(combine([upper, lower], geo.flag))
}

/// `D_f(A‖B) = Tr(A − B) + ∫₁^∞ f''(γ) Tr(A − γB)_+ + γ⁻³ f''(1/γ) Tr(B − γA)_+ dγ`
/// for PSD operators of positive trace.
pub fn d_f_generalized(f: &ConvexFunction, a: &HermitianOperator, b: &HermitianOperator, rel_tol: f64) -> Result<DivergenceValue> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    for x in [a, b] {
        let vals = x.eigvalsh()?;
        let min = vals.first().copied().unwrap_or(0.0);
        if min < -crate::linalg::PSD_ATOL.max(1e-9 * x.trace().abs()) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        if !(x.trace() > 0.0) {
            return Err(Error::Domain("operators must have positive trace".into()));
        }
    }
    let tol = tolerance(rel_tol)?;
    let geo = geometry(a, b)?;
    let (k_fwd, k_bwd) = (kinks(&geo.fwd, &geo.bwd), kinks(&geo.bwd, &geo.fwd));
    let scale = a.dim() as f64 * a.trace().max(b.trace());
    let (sf, sb) = (split_for(&geo.fwd, a, b)?, split_for(&geo.bwd, b, a)?);
    let first = integrate_half(
        &Half {
            weight: &weight_fwd(f),
            tail: &|g| f.upper_tail(g),
            hockey: &|g| match &sf {
                Some(k) if g >= k.threshold => k.positive_part(g),
                _ => positive_part_raw(a, b, g),
            },
            pencil: &geo.fwd,
            kinks: &k_fwd,
            scale,
            exact_from: exact_from(&sf),
        },
        tol,
    )?;
    if first.0.is_infinite() {
        return Ok(DivergenceValue::infinite(geo.flag));
    }
    let second = integrate_half(
        &Half {
            weight: &weight_bwd(f),
            tail: &|g| f.lower_tail(g),
            hockey: &|g| match &sb {
                Some(k) if g >= k.threshold => k.positive_part(g),
                _ => positive_part_raw(b, a, g),
            },
            pencil: &geo.bwd,
            kinks: &k_bwd,
            scale,
            exact_from: exact_from(&sb),
        },
        tol,
    )?;
    let mut v = combine([first, second], geo.flag);
    if v.is_finite() {
        v.value += a.trace() - b.trace();
    }
    Ok(v)
}

#[cfg(test)]
mod tests;
