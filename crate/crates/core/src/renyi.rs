//! Hellinger and Rényi divergences from the hockey-stick integral, the Petz,
//! sandwiched and geometric closed forms, Nussbaum–Szkoła distributions,
//! tensor-power regularization and the multiplicative continuity bracket.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::fdiv::{d_f_integral, geometry, umegaki, ConvexFunction, DivergenceValue, SupportFlag};
use crate::hockey::d_max;
use crate::linalg::{matrix_power, HermitianOperator, Matrix, SUPPORT_RTOL};
use crate::states::{check_same_dim, random_unitary, tensor_power, DensityMatrix};
use crate::{Error, Result};

/// Largest tensor-power dimension accepted by [`regularization_trace`].
pub const REGULARIZATION_MAX_DIM: usize = 64;

/// A Rényi order `α ∈ (0, 1) ∪ (1, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct AlphaOrder(f64);

impl AlphaOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
            return Err(Error::Domain(format!("order α = {alpha} must be positive, finite and ≠ 1")));
        }
        Ok(AlphaOrder(alpha))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `H_α(ρ‖σ) = α ∫₁^∞ γ^{α−2} E_γ(ρ‖σ) + γ^{−α−1} E_γ(σ‖ρ) dγ`.
pub fn h_alpha(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, rel_tol: f64) -> Result<DivergenceValue> {
    let a = AlphaOrder::new(alpha)?;
    d_f_integral(&ConvexFunction::Hellinger { alpha: a.get() }, rho, sigma, rel_tol)
}

/// `ln(1 + (α − 1) h)/(α − 1)`.
fn renyi_from_hellinger(alpha: f64, h: f64) -> f64 {
    let x = (alpha - 1.0) * h;
    if x <= -1.0 {
        return f64::INFINITY;
    }
    x.ln_1p() / (alpha - 1.0)
}

/// `D_α(ρ‖σ) = ln(1 + (α − 1) H_α(ρ‖σ))/(α − 1)`; `+∞` when `α > 1` and
/// `supp ρ ⊄ supp σ`, or `α < 1` and `ρ ⊥ σ`.
pub fn d_alpha(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, rel_tol: f64) -> Result<DivergenceValue> {
    let h = h_alpha(rho, sigma, alpha, rel_tol)?;
    if !h.is_finite() || (alpha < 1.0 && h.support_flag == SupportFlag::Disjoint) {
        return Ok(DivergenceValue { value: f64::INFINITY, abs_error: 0.0, support_flag: h.support_flag });
    }
    let value = renyi_from_hellinger(alpha, h.value).max(0.0);
    let slope = 1.0 / (1.0 + (alpha - 1.0) * h.value);
    Ok(DivergenceValue { value, abs_error: h.abs_error * slope.abs(), support_flag: h.support_flag })
}

fn check_range(name: &str, alpha: f64, lo: f64, lo_closed: bool, hi: f64) -> Result<()> {
    let above = if lo_closed { alpha >= lo } else { alpha > lo };
    if !above || alpha > hi || alpha == 1.0 || alpha.is_nan() {
        return Err(Error::Domain(format!("{name} Rényi divergence is defined for α in ({lo}, 1) ∪ (1, {hi}], got {alpha}")));
    }
    Ok(())
}

/// Support status shared by the closed forms: finite when `ρ ≪ σ`, or when
/// `α < 1` and `ρ` is not orthogonal to `σ`.
fn closed_form_support(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<Option<SupportFlag>> {
    let flag = geometry(rho.op(), sigma.op())?.flag;
    let finite = matches!(flag, SupportFlag::Full | SupportFlag::FirstInSecond) || (alpha < 1.0 && flag != SupportFlag::Disjoint);
    Ok(if finite { Some(flag) } else { None })
}

fn log_quasi(q: f64, alpha: f64) -> f64 {
    if q <= 0.0 {
        return f64::INFINITY;
    }
    (q.ln() / (alpha - 1.0)).max(0.0)
}

/// `Q̄_α = Tr ρ^α σ^{1−α}`, negative powers taken on the support.
pub fn petz_quasi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    let a = matrix_power(rho.op(), alpha)?;
    let b = matrix_power(sigma.op(), 1.0 - alpha)?;
    Ok(a.matrix().matmul(b.matrix()).trace().re)
}

/// Petz Rényi divergence `ln Tr(ρ^α σ^{1−α})/(α − 1)`, `α ∈ (0, 1) ∪ (1, 2]`.
pub fn petz_renyi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    check_range("Petz", alpha, 0.0, false, 2.0)?;
    if closed_form_support(rho, sigma, alpha)?.is_none() {
        return Ok(f64::INFINITY);
    }
    Ok(log_quasi(petz_quasi(rho, sigma, alpha)?, alpha))
}

/// `Q̃_α = Tr (σ^{(1−α)/2α} ρ σ^{(1−α)/2α})^α`.
pub fn sandwiched_quasi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    let s = matrix_power(sigma.op(), (1.0 - alpha) / (2.0 * alpha))?;
    let inner = rho.op().congruence(s.matrix());
    Ok(inner.eigvalsh()?.iter().map(|&l| if l > 0.0 { l.powf(alpha) } else { 0.0 }).sum())
}

/// Sandwiched Rényi divergence, `α ∈ [½, 1) ∪ (1, ∞)`.
pub fn sandwiched_renyi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    check_range("sandwiched", alpha, 0.5, true, f64::INFINITY)?;
    if closed_form_support(rho, sigma, alpha)?.is_none() {
        return Ok(f64::INFINITY);
    }
    Ok(log_quasi(sandwiched_quasi(rho, sigma, alpha)?, alpha))
}

/// `Tr σ #_α ρ = Tr σ^{½} (σ^{−½} ρ σ^{−½})^α σ^{½}` on `supp σ`.
fn geometric_quasi_on(base: &HermitianOperator, other: &HermitianOperator, alpha: f64) -> Result<f64> {
    let inv = matrix_power(base, -0.5)?;
    let half = matrix_power(base, 0.5)?;
    let inner = other.congruence(inv.matrix());
    let powered = matrix_power(&inner, alpha)?;
    Ok(powered.congruence(half.matrix()).trace())
}

/// Geometric Rényi divergence, `α ∈ (0, 1) ∪ (1, 2]`. For `α < 1` with
/// `supp σ ⊊ supp ρ` the mean is evaluated as `ρ #_{1−α} σ`; supports that are
/// not nested either way give a domain error.
pub fn geometric_renyi(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    check_range("geometric", alpha, 0.0, false, 2.0)?;
    let geo = geometry(rho.op(), sigma.op())?;
    let q = if geo.fwd.contained {
        geometric_quasi_on(sigma.op(), rho.op(), alpha)?
    } else if alpha > 1.0 || geo.flag == SupportFlag::Disjoint {
        return Ok(f64::INFINITY);
    } else if geo.bwd.contained {
        geometric_quasi_on(rho.op(), sigma.op(), 1.0 - alpha)?
    } else {
        return Err(Error::Domain("geometric Rényi divergence needs nested supports when α < 1".into()));
    };
    Ok(log_quasi(q, alpha))
}

/// Belavkin–Staszewski relative entropy `Tr σ^{½} X ln X σ^{½}` with
/// `X = σ^{−½} ρ σ^{−½}`, the `α → 1` limit of [`geometric_renyi`]; `+∞` when
/// `supp ρ ⊄ supp σ`.
pub fn belavkin_staszewski(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    if !geometry(rho.op(), sigma.op())?.fwd.contained {
        return Ok(f64::INFINITY);
    }
    let inv = matrix_power(sigma.op(), -0.5)?;
    let half = matrix_power(sigma.op(), 0.5)?;
    let x = rho.op().congruence(inv.matrix());
    let xlogx = x.apply_fn(|l| if l > 0.0 { l * l.ln() } else { 0.0 })?;
    Ok(xlogx.congruence(half.matrix()).trace())
}

/// Nussbaum–Szkoła pair on `d²` outcomes `(x, y) ↦ x·d + y`:
/// `P(x, y) = r_x |⟨v_x|u_y⟩|²`, `Q(x, y) = s_y |⟨v_x|u_y⟩|²`.
pub fn nussbaum_szkola(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(Vec<f64>, Vec<f64>)> {
    check_same_dim(rho, sigma)?;
    let r = rho.op().eigh()?;
    let s = sigma.op().eigh()?;
    let overlap = r.vectors.adjoint().matmul(&s.vectors);
    let d = rho.dim();
    let mut p = Vec::with_capacity(d * d);
    let mut q = Vec::with_capacity(d * d);
    for x in 0..d {
        for y in 0..d {
            let w = overlap[(x, y)].norm_sqr();
            p.push(r.values[x].max(0.0) * w);
            q.push(s.values[y].max(0.0) * w);
        }
    }
    Ok((p, q))
}

/// Classical Rényi divergence `ln Σ p^α q^{1−α}/(α − 1)`.
pub fn classical_renyi(p: &[f64], q: &[f64], alpha: f64) -> Result<f64> {
    AlphaOrder::new(alpha)?;
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { expected: p.len(), found: q.len() });
    }
    let mut sum = 0.0;
    for (&px, &qx) in p.iter().zip(q) {
        if px > 0.0 && qx > 0.0 {
            sum += px.powf(alpha) * qx.powf(1.0 - alpha);
        } else if px > 0.0 && alpha > 1.0 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(log_quasi(sum, alpha))
}

/// Measurement families for [`measured_renyi_lower`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasurementStrategy {
    SigmaEigenbasis,
    RhoEigenbasis,
    /// Best of the two eigenbases.
    NsPair,
    /// Best of `k` Haar-random orthonormal bases.
    RandomProjective { k: usize, seed: u64 },
}

fn outcome_distribution(rho: &DensityMatrix, basis: &Matrix) -> Vec<f64> {
    let rotated = basis.adjoint().matmul(rho.op().matrix()).matmul(basis);
    (0..rho.dim()).map(|i| rotated[(i, i)].re.max(0.0)).collect()
}

fn measured_in_basis(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, basis: &Matrix) -> Result<f64> {
    classical_renyi(&outcome_distribution(rho, basis), &outcome_distribution(sigma, basis), alpha)
}

/// Classical Rényi divergence of the outcome distributions of projective
/// measurements, a lower bound on the measured Rényi divergence.
pub fn measured_renyi_lower(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, strategy: MeasurementStrategy) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    AlphaOrder::new(alpha)?;
    match strategy {
        MeasurementStrategy::SigmaEigenbasis => measured_in_basis(rho, sigma, alpha, &sigma.op().eigh()?.vectors),
        MeasurementStrategy::RhoEigenbasis => measured_in_basis(rho, sigma, alpha, &rho.op().eigh()?.vectors),
        MeasurementStrategy::NsPair => Ok(measured_renyi_lower(rho, sigma, alpha, MeasurementStrategy::SigmaEigenbasis)?
            .max(measured_renyi_lower(rho, sigma, alpha, MeasurementStrategy::RhoEigenbasis)?)),
        MeasurementStrategy::RandomProjective { k, seed } => {
            if k == 0 {
                return Err(Error::Domain("need at least one random basis".into()));
            }
            let mut best = 0.0f64;
            for i in 0..k {
                let u = random_unitary(rho.dim(), seed.wrapping_add(i as u64));
                best = best.max(measured_in_basis(rho, sigma, alpha, &u)?);
            }
            Ok(best)
        }
    }
}

/// Single-copy bounds on `D_α` from quasi-entropies at `α ± ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct RenyiBoundChain {
    pub alpha: f64,
    pub epsilon: f64,
    pub d_alpha: DivergenceValue,
    /// `α > 1`: best eigenbasis measurement. `α < 1`: the explicit
    /// `ln((α(1−α)/ε)(Q̄_{α+ε} + Q̄_{α−ε}))/(α − 1)`.
    pub lower: f64,
    /// `α > 1`: the explicit `ln(((α²−α)/ε)(Q̃_{α+ε} + Q̃_{α−ε}))/(α − 1)`.
    /// `α < 1`: `D̄_α + ln 2/(1 − α)`.
    pub upper: f64,
}

impl RenyiBoundChain {
    /// Whether `lower ≤ D_α ≤ upper` up to `slack` plus the quadrature error.
    pub fn holds(&self, slack: f64) -> bool {
        let e = self.d_alpha.abs_error + slack;
        self.lower <= self.d_alpha.value + e && self.d_alpha.value <= self.upper + e
    }
}

fn check_epsilon(alpha: f64, epsilon: f64) -> Result<()> {
    let max = if alpha > 1.0 { alpha - 1.0 } else { alpha.min(1.0 - alpha) };
    if !(epsilon > 0.0 && epsilon < max) {
        return Err(Error::Domain(format!("ε = {epsilon} must lie in (0, {max}) for α = {alpha}")));
    }
    Ok(())
}

/// Explicit bound for `n` copies, per copy, using multiplicativity of the
/// quasi-entropies.
fn explicit_bound(alpha: f64, epsilon: f64, q_plus: f64, q_minus: f64, n: usize) -> f64 {
    let nf = n as f64;
    let prefactor = if alpha > 1.0 { (alpha * alpha - alpha) / epsilon } else { alpha * (1.0 - alpha) / epsilon };
    // ln(q₊ⁿ + q₋ⁿ) without overflow
    let (lp, lm) = (q_plus.ln() * nf, q_minus.ln() * nf);
    let hi = lp.max(lm);
    let log_sum = hi + ((lp - hi).exp() + (lm - hi).exp()).ln();
    (prefactor.ln() + log_sum) / ((alpha - 1.0) * nf)
}

pub fn renyi_bound_chain(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, epsilon: f64, rel_tol: f64) -> Result<RenyiBoundChain> {
    check_same_dim(rho, sigma)?;
    AlphaOrder::new(alpha)?;
    check_epsilon(alpha, epsilon)?;
    let d = d_alpha(rho, sigma, alpha, rel_tol)?;
    let (lower, upper) = if alpha > 1.0 {
        let measured = measured_renyi_lower(rho, sigma, alpha, MeasurementStrategy::NsPair)?;
        if closed_form_support(rho, sigma, alpha)?.is_none() {
            (measured, f64::INFINITY)
        } else {
            let qp = sandwiched_quasi(rho, sigma, alpha + epsilon)?;
            let qm = sandwiched_quasi(rho, sigma, alpha - epsilon)?;
            (measured, explicit_bound(alpha, epsilon, qp, qm, 1))
        }
    } else {
        if closed_form_support(rho, sigma, alpha)?.is_none() {
            return Ok(RenyiBoundChain { alpha, epsilon, d_alpha: d, lower: f64::INFINITY, upper: f64::INFINITY });
        }
        let qp = petz_quasi(rho, sigma, alpha + epsilon)?;
        let qm = petz_quasi(rho, sigma, alpha - epsilon)?;
        let upper = petz_renyi(rho, sigma, alpha)? + core::f64::consts::LN_2 / (1.0 - alpha);
        (explicit_bound(alpha, epsilon, qp, qm, 1), upper)
    };
    Ok(RenyiBoundChain { alpha, epsilon, d_alpha: d, lower, upper })
}

/// `(1/n) D_α(ρ^{⊗n}‖σ^{⊗n})` with the finite-`n` bounds it must satisfy.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularizationPoint {
    pub n: usize,
    pub value: f64,
    pub abs_error: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularizationTrace {
    pub alpha: f64,
    pub epsilon: f64,
    pub per_n: Vec<RegularizationPoint>,
    pub petz_ref: f64,
    /// `None` for `α < ½`, where the sandwiched divergence is not defined.
    pub sandwiched_ref: Option<f64>,
}

impl RegularizationTrace {
    pub fn n_values(&self) -> Vec<usize> {
        self.per_n.iter().map(|p| p.n).collect()
    }

    /// Whether every per-`n` value lies in its bracket, up to `slack` plus the
    /// quadrature error.
    pub fn chains_hold(&self, slack: f64) -> bool {
        self.per_n.iter().all(|p| {
            let e = p.abs_error + slack;
            p.lower <= p.value + e && p.value <= p.upper + e
        })
    }
}

/// Largest `n` for which the smallest nonzero eigenvalue of `ρ^{⊗n}` stays
/// above the support tolerance, so `n` copies keep the support of one.
fn resolvable_copies(rho: &DensityMatrix) -> Result<usize> {
    let v = rho.eigvalsh()?;
    let max = v.last().copied().unwrap_or(0.0);
    let cut = SUPPORT_RTOL * max;
    let min = v.iter().copied().find(|&l| l > cut).unwrap_or(max);
    if min >= max {
        return Ok(usize::MAX);
    }
    // (min/max)^n > SUPPORT_RTOL
    Ok((SUPPORT_RTOL.ln() / (min / max).ln()).ceil() as usize - 1)
}

/// Evaluates `(1/n) D_α(ρ^{⊗n}‖σ^{⊗n})` for `n = 1..=n_max`.
///
/// For `α < 1` each value is bracketed by the explicit Petz bound at
/// `ε = min(α, 1 − α)/2` and `D̄_α + ln 2/((1 − α) n)`; for `α > 1` by the
/// σ-eigenbasis measurement of the `n`-copy states and the explicit sandwiched
/// bound at `ε = (α − 1)/2`.
pub fn regularization_trace(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, n_max: usize, rel_tol: f64) -> Result<RegularizationTrace> {
    check_same_dim(rho, sigma)?;
    AlphaOrder::new(alpha)?;
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    let dim = (rho.dim() as u128).checked_pow(n_max as u32).unwrap_or(u128::MAX);
    if dim > REGULARIZATION_MAX_DIM as u128 {
        return Err(Error::TooLarge { dim: dim.min(usize::MAX as u128) as usize, limit: REGULARIZATION_MAX_DIM });
    }
    for (name, state) in [("ρ", rho), ("σ", sigma)] {
        let limit = resolvable_copies(state)?;
        if n_max > limit {
            return Err(Error::Support(format!(
                "{name}^⊗{n_max} has nonzero eigenvalues below the support tolerance (at most {limit} copies resolvable)"
            )));
        }
    }
    let finite = closed_form_support(rho, sigma, alpha)?.is_some();
    let petz_ref = if alpha <= 2.0 { petz_renyi(rho, sigma, alpha)? } else { f64::NAN };
    let sandwiched_ref = if alpha >= 0.5 { Some(sandwiched_renyi(rho, sigma, alpha)?) } else { None };
    let epsilon = if alpha > 1.0 { 0.5 * (alpha - 1.0) } else { 0.5 * alpha.min(1.0 - alpha) };
    let (qp, qm) = if !finite {
        (f64::NAN, f64::NAN)
    } else if alpha > 1.0 {
        (sandwiched_quasi(rho, sigma, alpha + epsilon)?, sandwiched_quasi(rho, sigma, alpha - epsilon)?)
    } else {
        (petz_quasi(rho, sigma, alpha + epsilon)?, petz_quasi(rho, sigma, alpha - epsilon)?)
    };
    let mut per_n = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let rn = tensor_power(rho, n)?;
        let sn = tensor_power(sigma, n)?;
        let d = d_alpha(&rn, &sn, alpha, rel_tol)?;
        let nf = n as f64;
        let (lower, upper) = if !finite {
            (f64::INFINITY, f64::INFINITY)
        } else if alpha > 1.0 {
            let measured = measured_renyi_lower(&rn, &sn, alpha, MeasurementStrategy::SigmaEigenbasis)? / nf;
            (measured, explicit_bound(alpha, epsilon, qp, qm, n))
        } else {
            (explicit_bound(alpha, epsilon, qp, qm, n), petz_ref + core::f64::consts::LN_2 / ((1.0 - alpha) * nf))
        };
        per_n.push(RegularizationPoint { n, value: d.value / nf, abs_error: d.abs_error / nf, lower, upper });
    }
    Ok(RegularizationTrace { alpha, epsilon, per_n, petz_ref, sandwiched_ref })
}

/// `κ(α, β)`: `e^{(β−α) D_max(σ‖ρ)}` for `α ≥ β`, `e^{(α−β) D_max(ρ‖σ)}`
/// otherwise.
pub fn kappa(alpha: f64, beta: f64, dmax_rho_sigma: f64, dmax_sigma_rho: f64) -> f64 {
    if alpha >= beta {
        ((beta - alpha) * dmax_sigma_rho).exp()
    } else {
        ((alpha - beta) * dmax_rho_sigma).exp()
    }
}

/// Bracket on `H_α` from `H_β`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KappaBracket {
    pub h_beta: DivergenceValue,
    pub lower: f64,
    pub upper: f64,
}

fn hellinger_or_kl(alpha: f64) -> Result<ConvexFunction> {
    if alpha == 1.0 {
        Ok(ConvexFunction::Kl)
    } else {
        ConvexFunction::hellinger(alpha)
    }
}

/// `(α/β) κ(α, β) H_β ≤ H_α ≤ (α/β) κ(β, α)⁻¹ H_β` for `ρ ≪≫ σ`, where
/// order 1 is the Umegaki relative entropy. The factor `α/β` accounts for the
/// prefactor of the integral representation of `H_α`.
pub fn kappa_bound(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, beta: f64, rel_tol: f64) -> Result<KappaBracket> {
    check_same_dim(rho, sigma)?;
    for (name, v) in [("α", alpha), ("β", beta)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Domain(format!("{name} = {v} must be positive and finite")));
        }
    }
    if geometry(rho.op(), sigma.op())?.flag != SupportFlag::Full {
        return Err(Error::Support("κ bracket needs equal supports".into()));
    }
    let h_beta = d_f_integral(&hellinger_or_kl(beta)?, rho, sigma, rel_tol)?;
    let (d1, d2) = (d_max(rho, sigma)?, d_max(sigma, rho)?);
    let ratio = alpha / beta;
    Ok(KappaBracket {
        h_beta,
        lower: ratio * kappa(alpha, beta, d1, d2) * h_beta.value,
        upper: ratio * h_beta.value / kappa(beta, alpha, d1, d2),
    })
}

/// `H_α` for `α > 0`, with order 1 meaning the Umegaki relative entropy.
pub fn h_alpha_or_kl(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, rel_tol: f64) -> Result<DivergenceValue> {
    if alpha == 1.0 {
        let v = umegaki(rho, sigma)?;
        let flag = geometry(rho.op(), sigma.op())?.flag;
        return Ok(DivergenceValue { value: v, abs_error: 0.0, support_flag: flag });
    }
    h_alpha(rho, sigma, alpha, rel_tol)
}

/// The states of the comparison plot of `D_α` against the closed forms.
pub fn figure_one_states() -> (DensityMatrix, DensityMatrix) {
    let rho = DensityMatrix::from_real(3, &[5.0, 4.0, 2.0, 4.0, 5.0, 2.0, 2.0, 2.0, 2.0].map(|x| x / 12.0)).expect("valid state");
    let sigma = DensityMatrix::from_real_diagonal(&[5.0 / 8.0, 2.0 / 8.0, 1.0 / 8.0]).expect("valid state");
    (rho, sigma)
}

/// A pinned qubit pair on which `D₂` is visibly not additive.
pub fn non_additivity_fixture() -> (DensityMatrix, DensityMatrix) {
    let rho = DensityMatrix::from_real(2, &[0.8, 0.38, 0.38, 0.2]).expect("valid state");
    let sigma = DensityMatrix::from_real_diagonal(&[0.95, 0.05]).expect("valid state");
    (rho, sigma)
}
