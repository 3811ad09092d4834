//! Hockey-stick divergence and the quantities derived from it: trace distance,
//! max-relative entropy, the Thompson and Hilbert metrics, and binary
//! hypothesis-testing errors.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::linalg::{self, HermitianOperator, Matrix, C64, PSD_ATOL};
use crate::states::{check_same_dim, DensityMatrix};
use crate::{Error, Result};

/// `Tr(A − γB)_+`, no input checks.
pub(crate) fn positive_part_raw(a: &HermitianOperator, b: &HermitianOperator, gamma: f64) -> Result<f64> {
    let x = HermitianOperator::lincomb(1.0, a, -gamma, b);
    Ok(x.eigvalsh()?.iter().filter(|&&l| l > 0.0).sum())
}

/// `Tr(A − γB)_+ − (Tr(A − γB))_+`, clamped at zero; no input checks.
pub(crate) fn e_gamma_raw(a: &HermitianOperator, b: &HermitianOperator, gamma: f64) -> Result<f64> {
    let pos = positive_part_raw(a, b, gamma)?;
    let gap = a.trace() - gamma * b.trace();
    Ok((pos - gap.max(0.0)).max(0.0))
}

/// `Tr(A − γB)_+` for large γ when `supp A ⊄ supp B`. In the eigenbasis of
/// `B` (support S, kernel K) the eigenvalues of `A − γB` that stay bounded
/// solve `λ ∈ spec(A_KK + A_KS (γB_S − A_SS + λ)⁻¹ A_SK)`. Evaluating them
/// this way avoids the `ε γ ‖B‖` cancellation of a direct decomposition.
#[derive(Clone, Debug)]
pub(crate) struct KernelSplit {
    a_ss: HermitianOperator,
    a_sk: Matrix,
    a_kk: HermitianOperator,
    b_s: Vec<f64>,
    tr_a: f64,
    tr_b: f64,
    norm: f64,
    /// Smallest γ at which the reduction is used.
    pub threshold: f64,
}

impl KernelSplit {
    /// `None` when `B` is zero or has trivial kernel.
    pub fn new(a: &HermitianOperator, b: &HermitianOperator) -> Result<Option<Self>> {
        let sb = b.eigh()?;
        let cut = sb.support_threshold();
        let n = b.dim();
        let (s_idx, k_idx): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| sb.values[i] > cut);
        if s_idx.is_empty() || k_idx.is_empty() {
            return Ok(None);
        }
        let rows = |idx: &[usize]| Matrix::from_fn(idx.len(), n, |r, j| sb.vectors[(j, idx[r])].conj());
        let (ps, pk) = (rows(&s_idx), rows(&k_idx));
        let b_s: Vec<f64> = s_idx.iter().map(|&i| sb.values[i]).collect();
        let norm = a.matrix().frobenius_norm();
        let b_min = b_s.iter().fold(f64::INFINITY, |m, &v| m.min(v));
        Ok(Some(KernelSplit {
            a_ss: a.congruence(&ps),
            a_sk: ps.matmul(a.matrix()).matmul_adjoint(&pk),
            a_kk: a.congruence(&pk),
            b_s,
            tr_a: a.trace(),
            tr_b: b.trace(),
            norm,
            threshold: (8.0 * norm / b_min).max(1.0),
        }))
    }

    /// `Tr(A − γB)_+`, valid for `γ ≥ threshold`.
    pub fn positive_part(&self, gamma: f64) -> Result<f64> {
        let s = self.b_s.len();
        let c = HermitianOperator::symmetrized(Matrix::from_fn(s, s, |i, j| {
            let d = if i == j { C64::new(gamma * self.b_s[i], 0.0) } else { C64::new(0.0, 0.0) };
            d - self.a_ss.entry(i, j)
        }));
        let cs = c.eigh()?;
        let g = cs.vectors.adjoint().matmul(&self.a_sk);
        let k = self.a_kk.dim();
        let schur = |lambda: f64| {
            let m = Matrix::from_fn(k, k, |i, j| {
                let corr: C64 = (0..s).map(|r| g[(r, i)].conj() * g[(r, j)] / (cs.values[r] + lambda)).sum();
                self.a_kk.entry(i, j) + corr
            });
            HermitianOperator::symmetrized(m).eigvalsh()
        };
        let start = self.a_kk.eigvalsh()?;
        let step_tol = 4.0 * f64::EPSILON * self.norm.max(f64::MIN_POSITIVE);
        let mut total = 0.0;
        for (i, &l0) in start.iter().enumerate() {
            // contraction factor below 1/49 once γ ≥ threshold
            let mut lambda = l0;
            for _ in 0..100 {
                let next = schur(lambda)?[i];
                let done = (next - lambda).abs() <= step_tol;
                lambda = next;
                if done {
                    break;
                }
            }
            total += lambda.max(0.0);
        }
        Ok(total)
    }

    /// `Tr(A − γB)_+ − (Tr(A − γB))_+`, valid for `γ ≥ threshold`.
    pub fn e_gamma(&self, gamma: f64) -> Result<f64> {
        let gap = self.tr_a - gamma * self.tr_b;
        Ok((self.positive_part(gamma)? - gap.max(0.0)).max(0.0))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("γ must be finite and non-negative, got {gamma}")));
    }
    Ok(())
}

fn check_psd(a: &HermitianOperator) -> Result<()> {
    let min = a.eigvalsh()?.first().copied().unwrap_or(0.0);
    if min < -PSD_ATOL.max(1e-9 * a.trace().abs()) {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(())
}

/// Hockey-stick divergence of two PSD operators.
pub fn e_gamma_operators(a: &HermitianOperator, b: &HermitianOperator, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    check_psd(a)?;
    check_psd(b)?;
    e_gamma_raw(a, b, gamma)
}

/// `E_γ(ρ‖σ) = Tr(ρ − γσ)_+ − (1 − γ)_+`.
pub fn e_gamma(rho: &DensityMatrix, sigma: &DensityMatrix, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_same_dim(rho, sigma)?;
    e_gamma_raw(rho.op(), sigma.op(), gamma)
}

/// `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    Ok(0.5 * linalg::trace_norm(&rho.op().sub(sigma.op()))?)
}

/// Relative position of `A` with respect to `B`: eigenvalues of
/// `B^{-1/2} A B^{-1/2}` on `supp B` (the pencil ratios) and the weight of `A`
/// outside `supp B`.
#[derive(Clone, Debug)]
pub(crate) struct Pencil {
    /// Ascending; meaningful only when `contained`.
    pub ratios: Vec<f64>,
    /// `Tr Π_{ker B} A`.
    pub kernel_mass: f64,
    pub contained: bool,
}

impl Pencil {
    /// `ln λ_max(B^{-1/2} A B^{-1/2})`, `+∞` when `supp A ⊄ supp B`.
    pub fn dmax(&self) -> f64 {
        if !self.contained {
            return f64::INFINITY;
        }
        self.ratios.last().copied().unwrap_or(0.0).ln()
    }

    /// `e^{D_max}`.
    pub fn endpoint(&self) -> f64 {
        if !self.contained {
            return f64::INFINITY;
        }
        self.ratios.last().copied().unwrap_or(0.0)
    }
}

/// Relative weight outside the support below which `supp A ⊆ supp B` is
/// accepted.
const CONTAINMENT_RTOL: f64 = 1e-12;

pub(crate) fn pencil(a: &HermitianOperator, b: &HermitianOperator) -> Result<Pencil> {
    let sb = b.eigh()?;
    let cut = sb.support_threshold();
    let kernel = sb.reconstruct(|l| if l > cut { 0.0 } else { 1.0 });
    let kernel_mass = a.matrix().matmul(kernel.matrix()).trace().re.max(0.0);
    let contained = kernel_mass <= CONTAINMENT_RTOL * a.trace().abs().max(f64::MIN_POSITIVE);
    let ratios = if contained {
        let inv_sqrt = sb.reconstruct(|l| if l > cut { 1.0 / l.sqrt() } else { 0.0 });
        let m = a.congruence(inv_sqrt.matrix());
        m.eigvalsh()?.into_iter().map(|l| l.max(0.0)).collect()
    } else {
        Vec::new()
    };
    Ok(Pencil { ratios, kernel_mass, contained })
}

/// `D_max(ρ‖σ) = ln inf{λ : ρ ≤ λσ}`; `+∞` when `supp ρ ⊄ supp σ`.
pub fn d_max(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_same_dim(rho, sigma)?;
    Ok(pencil(rho.op(), sigma.op())?.dmax())
}

/// `D_max` for PSD operators of arbitrary trace.
pub fn d_max_operators(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(pencil(a, b)?.dmax())
}

/// Thompson metric `Ξ = max(D_max(ρ‖σ), D_max(σ‖ρ))`.
pub fn thompson(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(d_max(rho, sigma)?.max(d_max(sigma, rho)?))
}

/// Hilbert projective metric `Ω = D_max(ρ‖σ) + D_max(σ‖ρ)`.
pub fn hilbert_omega(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(d_max(rho, sigma)? + d_max(sigma, rho)?)
}

fn check_prior(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("prior {p} outside [0, 1]")));
    }
    Ok(())
}

/// Minimal error of discriminating `ρ` (prior `p`) from `σ` (prior `1 − p`):
/// `½(1 − ‖pρ − (1 − p)σ‖₁)`.
pub fn bayes_error(p: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_prior(p)?;
    check_same_dim(rho, sigma)?;
    let x = HermitianOperator::lincomb(p, rho.op(), -(1.0 - p), sigma.op());
    Ok((0.5 * (1.0 - linalg::trace_norm(&x)?)).max(0.0))
}

/// DeGroot statistical information `min(p, 1 − p) − B_p(ρ‖σ)`.
pub fn degroot_info(p: f64, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok((p.min(1.0 - p) - bayes_error(p, rho, sigma)?).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_density, random_pure};

    #[test]
    fn kernel_split_matches_direct_and_limit() {
        let rho = random_density(3, 3, 7).unwrap();
        let sigma = random_density(3, 1, 8).unwrap();
        let (a, b) = (rho.op(), sigma.op());
        let split = KernelSplit::new(a, b).unwrap().unwrap();
        let g = 2.0 * split.threshold;
        let direct = e_gamma_raw(a, b, g).unwrap();
        assert!((split.e_gamma(g).unwrap() - direct).abs() < 1e-12 * g);
        let p = pencil(a, b).unwrap();
        let far = split.e_gamma(1e300).unwrap();
        assert!((far - p.kernel_mass).abs() < 1e-14, "{far} vs {}", p.kernel_mass);
        assert!(KernelSplit::new(a, a).unwrap().is_none());
    }

    fn diag_pair() -> (DensityMatrix, DensityMatrix) {
        (DensityMatrix::from_real_diagonal(&[0.9, 0.1]).unwrap(), DensityMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap())
    }

    #[test]
    fn identical_states_give_zero() {
        let r = random_density(3, 3, 1).unwrap();
        for g in [0.0, 0.5, 1.0, 2.0, 10.0] {
            assert!(e_gamma(&r, &r, g).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn trace_distance_at_gamma_one() {
        let (r, s) = diag_pair();
        assert!((e_gamma(&r, &s, 1.0).unwrap() - 0.4).abs() < 1e-15);
        assert!((trace_distance(&r, &s).unwrap() - 0.4).abs() < 1e-15);
        for seed in 0..100 {
            let r = random_density(3, 3, seed).unwrap();
            let s = random_density(3, 2, 500 + seed).unwrap();
            assert!((e_gamma(&r, &s, 1.0).unwrap() - trace_distance(&r, &s).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn gamma_zero_and_orthogonal() {
        let (r, s) = diag_pair();
        assert_eq!(e_gamma(&r, &s, 0.0).unwrap(), 0.0);
        let a = DensityMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap();
        let b = DensityMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap();
        for g in [1.0, 3.0, 1e6] {
            assert!((e_gamma(&a, &b, g).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn exchange_symmetry_and_vanishing() {
        for seed in 0..200 {
            let d = 2 + seed as usize % 3;
            let r = random_density(d, d, seed).unwrap();
            let s = random_density(d, d, 1000 + seed).unwrap();
            let g = 0.1 + (seed as f64 * 0.37) % 5.0;
            let lhs = e_gamma(&r, &s, g).unwrap();
            let rhs = g * e_gamma(&s, &r, 1.0 / g).unwrap();
            assert!((lhs - rhs).abs() < 1e-12, "seed {seed}: {lhs} vs {rhs}");
            let dm = d_max(&r, &s).unwrap();
            let gam = dm.exp();
            assert_eq!(e_gamma(&r, &s, gam * (1.0 + 1e-6)).unwrap(), 0.0);
            assert!(e_gamma(&r, &s, gam * (1.0 - 1e-6)).unwrap() > 0.0);
        }
    }

    #[test]
    fn monotone_decreasing_in_gamma_above_one() {
        let r = random_density(3, 3, 4).unwrap();
        let s = random_density(3, 3, 5).unwrap();
        let mut prev = f64::INFINITY;
        for k in 0..50 {
            let e = e_gamma(&r, &s, 1.0 + 0.1 * k as f64).unwrap();
            assert!(e <= prev + 1e-15);
            prev = e;
        }
    }

    #[test]
    fn dmax_values_and_support() {
        let (r, s) = diag_pair();
        assert!((d_max(&r, &s).unwrap() - 1.8f64.ln()).abs() < 1e-14);
        assert!((d_max(&s, &r).unwrap() - 5f64.ln()).abs() < 1e-13);
        assert!((thompson(&r, &s).unwrap() - 5f64.ln()).abs() < 1e-13);
        assert!((hilbert_omega(&r, &s).unwrap() - 9f64.ln()).abs() < 1e-13);
        let pure = DensityMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(d_max(&s, &pure).unwrap(), f64::INFINITY);
        assert!((d_max(&pure, &s).unwrap() - 2f64.ln()).abs() < 1e-14);
        let r = random_density(3, 3, 8).unwrap();
        assert!(d_max(&r, &r).unwrap().abs() < 1e-12);
    }

    #[test]
    fn degroot_matches_hockey_stick_form() {
        for seed in 0..100 {
            let r = random_density(3, 3, seed).unwrap();
            let s = random_density(3, 3, 77 + seed).unwrap();
            for p in [0.05, 0.2, 0.5, 0.7, 0.95] {
                let via_e = if p <= 0.5 {
                    p * e_gamma(&r, &s, (1.0 - p) / p).unwrap()
                } else {
                    (1.0 - p) * e_gamma(&s, &r, p / (1.0 - p)).unwrap()
                };
                assert!((degroot_info(p, &r, &s).unwrap() - via_e).abs() < 1e-13);
            }
        }
        let (r, s) = diag_pair();
        assert!((degroot_info(0.5, &r, &s).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn operator_version_rejects_non_psd() {
        let a = HermitianOperator::from_real_diagonal(&[1.0, -0.5]);
        let b = HermitianOperator::identity(2);
        assert!(matches!(e_gamma_operators(&a, &b, 1.0), Err(Error::NotPsd { .. })));
        assert!(e_gamma_operators(&b, &b, -1.0).is_err());
        // unnormalized: E_γ(2I‖I) at γ=1 is Tr(I)_+ − Tr(I) = 0
        assert_eq!(e_gamma_operators(&b.scale(2.0), &b, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn pure_state_dmax_infinite_one_way() {
        let p = random_pure(2, 3).unwrap();
        let m = DensityMatrix::maximally_mixed(2);
        assert_eq!(d_max(&m, &p).unwrap(), f64::INFINITY);
        assert!((d_max(&p, &m).unwrap() - 2f64.ln()).abs() < 1e-12);
    }
}
