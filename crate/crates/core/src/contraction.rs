//! Contraction coefficients and SDPI constants of channels, with explicit
//! lower-bound semantics for everything that is a supremum over a continuum.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::fdiv::{chi2_closed, d_f_integral, geometry, inv_log_mean, ConvexFunction, DivergenceValue};
use crate::hockey::e_gamma;
use crate::linalg::{matrix_power, HermitianOperator, Matrix, C64};
use crate::optim::{maximize, orthonormal_pair, projector, OptimizerConfig};
use crate::states::{cq_embed, depolarizing, random_density, random_pure, CQState, DensityMatrix, QuantumChannel};
use crate::{Error, Result};

/// Inputs whose divergence falls below this are skipped by the samplers.
pub const DEGENERATE_DIVERGENCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateKind {
    ExactClosedForm,
    OptimizedLowerBound,
    SampledLowerBound,
}

impl EstimateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateKind::ExactClosedForm => "exact_closed_form",
            EstimateKind::OptimizedLowerBound => "optimized_lower_bound",
            EstimateKind::SampledLowerBound => "sampled_lower_bound",
        }
    }
}

/// A contraction coefficient estimate in `[0, 1]` with the input pair that
/// attains it, when there is one.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub witness: Option<(DensityMatrix, DensityMatrix)>,
}

fn clamp_unit(v: f64) -> f64 {
    v.clamp(0.0, 1.0)
}

fn check_input_dim(channel: &QuantumChannel, state: &DensityMatrix) -> Result<()> {
    if state.dim() != channel.dim_in() {
        return Err(Error::DimensionMismatch { expected: channel.dim_in(), found: state.dim() });
    }
    Ok(())
}

/// `η_γ(𝒜) = sup_{ψ ⊥ φ} E_γ(𝒜(ψ)‖𝒜(φ))` by multi-start compass search over
/// orthonormal pure-state pairs.
pub fn eta_gamma(channel: &QuantumChannel, gamma: f64, cfg: &OptimizerConfig) -> Result<ContractionEstimate> {
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("γ = {gamma} must be finite and ≥ 1")));
    }
    let d = channel.dim_in();
    if d < 2 {
        return Ok(ContractionEstimate { value: 0.0, kind: EstimateKind::OptimizedLowerBound, witness: None });
    }
    let objective = |x: &[f64]| -> Result<f64> {
        match orthonormal_pair(x, d) {
            Some((psi, phi)) => e_gamma(&channel.apply(&projector(&psi))?, &channel.apply(&projector(&phi))?, gamma),
            None => Ok(0.0),
        }
    };
    let best = maximize(objective, 4 * d, cfg)?;
    let witness = orthonormal_pair(&best.point, d).map(|(psi, phi)| (projector(&psi), projector(&phi)));
    Ok(ContractionEstimate { value: clamp_unit(best.value), kind: EstimateKind::OptimizedLowerBound, witness })
}

/// Dobrushin coefficient `η_Tr = η_1`.
pub fn eta_tr(channel: &QuantumChannel, cfg: &OptimizerConfig) -> Result<ContractionEstimate> {
    eta_gamma(channel, 1.0, cfg)
}

/// Traceless Hermitian basis: symmetric and antisymmetric off-diagonal units,
/// then `|k⟩⟨k| − |k+1⟩⟨k+1|`.
fn traceless_basis(d: usize) -> Vec<Matrix> {
    let mut basis = Vec::with_capacity(d * d - 1);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in i + 1..d {
            let mut re = Matrix::zeros(d, d);
            re[(i, j)] = C64::new(s, 0.0);
            re[(j, i)] = C64::new(s, 0.0);
            basis.push(re);
            let mut im = Matrix::zeros(d, d);
            im[(i, j)] = C64::new(0.0, s);
            im[(j, i)] = C64::new(0.0, -s);
            basis.push(im);
        }
    }
    for k in 0..d - 1 {
        let mut m = Matrix::zeros(d, d);
        m[(k, k)] = C64::new(1.0, 0.0);
        m[(k + 1, k + 1)] = C64::new(-1.0, 0.0);
        basis.push(m);
    }
    basis
}

/// Coordinates of `X` under the weighted embedding whose squared norm is the
/// quadratic form `χ²(σ + X‖σ) = Σ_ij |⟨i|X|j⟩|² / L(s_i, s_j)` in the
/// eigenbasis of `σ`, restricted to `supp σ`.
fn chi2_coordinates(sigma: &HermitianOperator, xs: &[Matrix]) -> Result<Vec<Vec<C64>>> {
    let s = sigma.eigh()?;
    let cut = s.support_threshold();
    let n = s.dim();
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let on = s.values[i] > cut && s.values[j] > cut;
            weights.push(if on { inv_log_mean(s.values[i], s.values[j]).sqrt() } else { 0.0 });
        }
    }
    Ok(xs
        .iter()
        .map(|x| {
            let r = s.vectors.adjoint().matmul(x).matmul(&s.vectors);
            (0..n * n).map(|k| r[(k / n, k % n)] * weights[k]).collect()
        })
        .collect())
}

fn gram(coords: &[Vec<C64>]) -> Result<HermitianOperator> {
    let n = coords.len();
    let mut g = Vec::with_capacity(n * n);
    for a in coords {
        for b in coords {
            g.push(a.iter().zip(b).map(|(x, y)| (x.conj() * y).re).sum::<f64>());
        }
    }
    HermitianOperator::from_real(n, &g)
}

/// `η_{x²}(𝒜, σ) = sup_ρ χ²(𝒜(ρ)‖𝒜(σ))/χ²(ρ‖σ)`.
///
/// Both divergences are exactly quadratic in `ρ − σ`, so the supremum is the
/// top generalized eigenvalue of the two Gram matrices on traceless Hermitian
/// perturbations. The witness is `σ + tX` for the top direction `X`, scaled
/// to stay positive.
pub fn eta_x2_local(channel: &QuantumChannel, sigma: &DensityMatrix) -> Result<ContractionEstimate> {
    check_input_dim(channel, sigma)?;
    let d = sigma.dim();
    let spec = sigma.eigvalsh()?;
    let lmin = spec[0];
    if !(lmin > 1e-12 * spec[d - 1]) {
        return Err(Error::Support(format!("σ must be full rank (λ_min = {lmin:e})")));
    }
    if d < 2 {
        return Ok(ContractionEstimate { value: 0.0, kind: EstimateKind::ExactClosedForm, witness: None });
    }
    let basis = traceless_basis(d);
    let images: Vec<Matrix> = basis.iter().map(|b| channel.apply_matrix(b)).collect();
    let g_in = gram(&chi2_coordinates(sigma.op(), &basis)?)?;
    let g_out = gram(&chi2_coordinates(&channel.apply(sigma)?.op().clone(), &images)?)?;
    let whiten = matrix_power(&g_in, -0.5)?;
    let m = g_out.congruence(whiten.matrix());
    let top = m.eigh()?;
    let k = top.dim() - 1;
    let value = clamp_unit(top.values[k]);
    let v: Vec<C64> = (0..top.dim()).map(|i| top.vectors[(i, k)]).collect();
    let coeffs: Vec<f64> = (0..top.dim()).map(|i| (0..top.dim()).map(|j| (whiten.entry(i, j) * v[j]).re).sum()).collect();
    let mut x = Matrix::zeros(d, d);
    for (c, b) in coeffs.iter().zip(&basis) {
        x = x.add(&b.scale(C64::new(*c, 0.0)));
    }
    let xh = HermitianOperator::new(x)?;
    let norm = xh.eigh()?.max_abs();
    let witness = if norm > 0.0 {
        let rho = HermitianOperator::lincomb(1.0, sigma.op(), 0.5 * lmin / norm, &xh);
        Some((DensityMatrix::new(rho)?, sigma.clone()))
    } else {
        None
    };
    Ok(ContractionEstimate { value, kind: EstimateKind::ExactClosedForm, witness })
}

/// `χ²(𝒜(ρ)‖𝒜(σ))/χ²(ρ‖σ)` for a witness pair.
pub fn chi2_ratio(channel: &QuantumChannel, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let den = chi2_closed(rho, sigma)?;
    if !(den > DEGENERATE_DIVERGENCE) {
        return Ok(0.0);
    }
    Ok(chi2_closed(&channel.apply(rho)?, &channel.apply(sigma)?)? / den)
}

/// Largest [`eta_x2_local`] over `τ_d` and `n_samples` random full-rank `σ`.
pub fn eta_x2_global(channel: &QuantumChannel, n_samples: usize, seed: u64) -> Result<ContractionEstimate> {
    let d = channel.dim_in();
    let mut best = eta_x2_local(channel, &DensityMatrix::maximally_mixed(d))?;
    for i in 0..n_samples {
        let sigma = random_density(d, d, seed.wrapping_add(i as u64))?;
        let e = eta_x2_local(channel, &sigma)?;
        if e.value > best.value {
            best = e;
        }
    }
    best.kind = EstimateKind::SampledLowerBound;
    Ok(best)
}

fn divergence_ratio(f: &ConvexFunction, channel: &QuantumChannel, rho: &DensityMatrix, sigma: &DensityMatrix, rel_tol: f64) -> Result<Option<f64>> {
    let den = d_f_integral(f, rho, sigma, rel_tol)?;
    if !den.is_finite() || !(den.value > DEGENERATE_DIVERGENCE) {
        return Ok(None);
    }
    let num = d_f_integral(f, &channel.apply(rho)?, &channel.apply(sigma)?, rel_tol)?;
    if !num.is_finite() {
        return Ok(None);
    }
    Ok(Some(num.value / den.value))
}

/// Step sizes, relative to the positivity limit, for local perturbations.
const LOCAL_STEPS: [f64; 3] = [0.1, 0.01, 0.001];

fn local_candidates(channel: &QuantumChannel, sigma: &DensityMatrix, out: &mut Vec<(DensityMatrix, DensityMatrix)>) -> Result<()> {
    let local = eta_x2_local(channel, sigma)?;
    if let Some((rho, _)) = local.witness {
        // rho = σ + t_max X with t_max at half the positivity limit
        for t in LOCAL_STEPS {
            out.push((rho.mix(t, sigma)?, sigma.clone()));
        }
    }
    Ok(())
}

/// Sampled lower bound on `η_f(𝒜, σ)` (when `fixed_sigma` is given) or
/// `η_f(𝒜)`: the best ratio `D_f(𝒜(ρ)‖𝒜(σ))/D_f(ρ‖σ)` over seeded random
/// pairs, local perturbations along the top `χ²` direction (at `σ`, or at the
/// maximizer of [`eta_x2_global`] with the same seed) and, for the global
/// coefficient, a mixed version of the `η_Tr` witness pair.
pub fn eta_f_sampled(
    channel: &QuantumChannel,
    f: &ConvexFunction,
    n_samples: usize,
    seed: u64,
    fixed_sigma: Option<&DensityMatrix>,
    rel_tol: f64,
) -> Result<ContractionEstimate> {
    let c = f.second_at_one();
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("f''(1) = {c} must be positive and finite")));
    }
    let d = channel.dim_in();
    if let Some(s) = fixed_sigma {
        check_input_dim(channel, s)?;
    }
    let mut candidates = Vec::new();
    match fixed_sigma {
        Some(s) => {
            if s.eigvalsh()?[0] > 1e-12 {
                local_candidates(channel, s, &mut candidates)?;
            }
        }
        None => {
            if let Some((_, sigma)) = eta_x2_global(channel, n_samples, seed)?.witness {
                local_candidates(channel, &sigma, &mut candidates)?;
            }
            let cfg = OptimizerConfig { restarts: 4, max_iters: 200, ..OptimizerConfig::with_seed(seed) };
            if let Some((psi, phi)) = eta_tr(channel, &cfg)?.witness {
                candidates.push((psi.mix(0.9, &phi)?, phi.mix(0.9, &psi)?));
            }
        }
    }
    for i in 0..n_samples {
        let base = seed.wrapping_mul(0x9E37_79B9).wrapping_add(4 * i as u64);
        let sigma = match fixed_sigma {
            Some(s) => s.clone(),
            None => random_density(d, d, base)?,
        };
        let rho = match i % 3 {
            0 => random_density(d, d, base + 1)?,
            1 => random_pure(d, base + 1)?.mix(0.5, &sigma)?,
            _ => random_density(d, d, base + 1)?.mix(0.05, &sigma)?,
        };
        if fixed_sigma.is_none() && i % 8 == 0 && sigma.eigvalsh()?[0] > 1e-12 {
            local_candidates(channel, &sigma, &mut candidates)?;
        }
        candidates.push((rho, sigma));
    }
    let mut best = ContractionEstimate { value: 0.0, kind: EstimateKind::SampledLowerBound, witness: None };
    for (rho, sigma) in candidates {
        if let Some(r) = divergence_ratio(f, channel, &rho, &sigma, rel_tol)? {
            if r > best.value || best.witness.is_none() {
                best.value = r;
                best.witness = Some((rho, sigma));
            }
        }
    }
    best.value = clamp_unit(best.value);
    Ok(best)
}

/// Both sides of `D_f(𝒟_{p,σ}(ρ)‖σ) = D_F(ρ‖σ)`, `F(x) = f((1 − p)x + p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PullbackPair {
    /// Through the channel.
    pub left: DivergenceValue,
    /// Through the pulled-back generator.
    pub right: DivergenceValue,
}

impl PullbackPair {
    pub fn agree(&self, slack: f64) -> bool {
        if !self.left.is_finite() || !self.right.is_finite() {
            return self.left.value == self.right.value;
        }
        (self.left.value - self.right.value).abs() <= self.left.abs_error + self.right.abs_error + slack
    }
}

pub fn depol_pullback_divergence(f: &ConvexFunction, p: f64, sigma: &DensityMatrix, rho: &DensityMatrix, rel_tol: f64) -> Result<PullbackPair> {
    let channel = depolarizing(p, sigma)?;
    let left = d_f_integral(f, &channel.apply(rho)?, sigma, rel_tol)?;
    let pulled = ConvexFunction::depol_pullback(f.clone(), p)?;
    let right = d_f_integral(&pulled, rho, sigma, rel_tol)?;
    Ok(PullbackPair { left, right })
}

/// `I_f(U:B) = Σ_u p(u) D_f(ρ^u‖ρ̄)`.
pub fn f_mutual_information(f: &ConvexFunction, cq: &CQState, rel_tol: f64) -> Result<DivergenceValue> {
    let bar = cq.average();
    let embedded = cq_embed(cq)?;
    let flag = geometry(embedded.op(), cq.product_of_marginals()?.op())?.flag;
    let mut out = DivergenceValue { value: 0.0, abs_error: 0.0, support_flag: flag };
    for (&p, state) in cq.probs().iter().zip(cq.states()) {
        if p == 0.0 {
            continue;
        }
        let d = d_f_integral(f, state, &bar, rel_tol)?;
        if !d.is_finite() {
            return Ok(DivergenceValue::infinite(flag));
        }
        out.value += p * d.value;
        out.abs_error += p * d.abs_error;
    }
    Ok(out)
}

/// `D_f(ρ_UB‖ρ_U ⊗ ρ_B)` evaluated on the block-diagonal embedding.
pub fn f_mutual_information_embedded(f: &ConvexFunction, cq: &CQState, rel_tol: f64) -> Result<DivergenceValue> {
    d_f_integral(f, &cq_embed(cq)?, &cq.product_of_marginals()?, rel_tol)
}

/// Outcome of [`less_noisy_falsifier`]. The order itself is never certified.
#[derive(Clone, Debug, PartialEq)]
pub enum LessNoisyReport {
    Violation { rho: DensityMatrix, sigma: DensityMatrix, d_m: f64, d_n: f64 },
    Inconclusive { samples: usize },
}

impl LessNoisyReport {
    pub fn is_violation(&self) -> bool {
        matches!(self, LessNoisyReport::Violation { .. })
    }
}

/// Searches seeded random pairs for `D_f(𝓜(ρ)‖𝓜(σ)) < D_f(𝓝(ρ)‖𝓝(σ))`,
/// which refutes `𝓜 ⪰ 𝓝` in the less-noisy order.
pub fn less_noisy_falsifier(
    m: &QuantumChannel,
    n: &QuantumChannel,
    f: &ConvexFunction,
    n_samples: usize,
    seed: u64,
    rel_tol: f64,
) -> Result<LessNoisyReport> {
    if m.dim_in() != n.dim_in() {
        return Err(Error::DimensionMismatch { expected: m.dim_in(), found: n.dim_in() });
    }
    let d = m.dim_in();
    for i in 0..n_samples {
        let base = seed.wrapping_mul(0x2545_F491).wrapping_add(2 * i as u64);
        let sigma = random_density(d, d, base)?;
        let rho = if i % 2 == 0 { random_density(d, d, base + 1)? } else { random_pure(d, base + 1)?.mix(0.5, &sigma)? };
        let dm = d_f_integral(f, &m.apply(&rho)?, &m.apply(&sigma)?, rel_tol)?;
        let dn = d_f_integral(f, &n.apply(&rho)?, &n.apply(&sigma)?, rel_tol)?;
        let violated = if dn.is_finite() && dm.is_finite() {
            let tol = 10.0 * (dm.abs_error + dn.abs_error) + 1e-9 * dn.value.abs().max(1.0);
            dm.value + tol < dn.value
        } else {
            !dn.is_finite() && dm.is_finite()
        };
        if violated {
            return Ok(LessNoisyReport::Violation { rho, sigma, d_m: dm.value, d_n: dn.value });
        }
    }
    Ok(LessNoisyReport::Inconclusive { samples: n_samples })
}
