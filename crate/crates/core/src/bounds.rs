//! Reverse Pinsker inequalities, the improved Fuchs–van de Graaf bound,
//! continuity in the first argument and amortized channel-divergence bounds.
//! Every bound is returned as a [`BoundReport`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::fdiv::{d_f_integral, umegaki, ConvexFunction, DivergenceValue};
use crate::hockey::{d_max, e_gamma};
use crate::linalg::fidelity;
use crate::optim::{maximize, unit_vector, OptimizerConfig};
use crate::quad::{integrate, Tolerance};
use crate::renyi::h_alpha;
use crate::states::{check_same_dim, random_density, DensityMatrix, QuantumChannel};
use crate::{Error, Result};

/// Whether the bound caps the quantity from above or below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `lhs ≤ rhs`.
    Upper,
    /// `lhs ≥ rhs`.
    Lower,
}

/// A single evaluated inequality. `lhs` is the bounded quantity, `rhs` the
/// bound, and `slack ≥ 0` when the inequality holds.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub bound_name: &'static str,
    pub kind: BoundKind,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    /// Combined numerical error of both sides.
    pub abs_error: f64,
    pub inputs_digest: u64,
}

/// Floating-point error allowance for closed-form sides.
fn roundoff(values: &[f64]) -> f64 {
    let scale = values.iter().filter(|v| v.is_finite()).fold(1.0f64, |m, v| m.max(v.abs()));
    64.0 * f64::EPSILON * scale
}

impl BoundReport {
    pub fn new(bound_name: &'static str, kind: BoundKind, lhs: f64, rhs: f64, abs_error: f64, inputs_digest: u64) -> Self {
        let (small, large) = match kind {
            BoundKind::Upper => (lhs, rhs),
            BoundKind::Lower => (rhs, lhs),
        };
        let slack = if large == f64::INFINITY || small == f64::NEG_INFINITY {
            f64::INFINITY
        } else if small.is_nan() || large.is_nan() {
            f64::NAN
        } else {
            large - small
        };
        BoundReport { bound_name, kind, lhs, rhs, slack, abs_error: abs_error + roundoff(&[lhs, rhs]), inputs_digest }
    }

    /// `slack ≥ −factor · abs_error`.
    pub fn holds(&self, factor: f64) -> bool {
        self.slack >= -factor * self.abs_error
    }
}

/// FNV-1a over the bit patterns of every input.
#[derive(Clone, Copy)]
pub(crate) struct Digest(pub(crate) u64);

impl Digest {
    pub(crate) fn new() -> Self {
        Digest(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn bytes(mut self, data: &[u8]) -> Self {
        for &b in data {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
        self
    }

    pub(crate) fn real(self, x: f64) -> Self {
        self.bytes(&x.to_bits().to_le_bytes())
    }

    pub(crate) fn state(mut self, rho: &DensityMatrix) -> Self {
        for z in rho.op().matrix().as_slice() {
            self = self.real(z.re).real(z.im);
        }
        self
    }

    pub(crate) fn channel(mut self, ch: &QuantumChannel) -> Self {
        for k in ch.kraus() {
            for z in k.as_slice() {
                self = self.real(z.re).real(z.im);
            }
        }
        self
    }

    pub(crate) fn function(self, f: &ConvexFunction) -> Self {
        self.bytes(format!("{f:?}").as_bytes())
    }
}

/// `w·v` with `0·∞ = 0`.
fn wmul(w: f64, v: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * v
    }
}

/// Pair geometry used by every reverse-Pinsker bound.
struct PairData {
    e1: f64,
    d1: f64,
    d2: f64,
}

fn pair_data(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<PairData> {
    check_same_dim(rho, sigma)?;
    Ok(PairData { e1: e_gamma(rho, sigma, 1.0)?, d1: d_max(rho, sigma)?, d2: d_max(sigma, rho)? })
}

/// `∫₁^{e^D} (e^D − γ)/(e^D − 1) w(γ) dγ` in `t = ln γ`, or `tail` when
/// `D = ∞`.
fn chord_integral(w: impl Fn(f64) -> f64, d: f64, tail: f64, rel_tol: f64) -> Result<(f64, f64)> {
    if d <= 0.0 {
        return Ok((0.0, 0.0));
    }
    if d.is_infinite() {
        return Ok((tail, 0.0));
    }
    let gamma_max = d.exp();
    let den = d.exp_m1();
    let q = integrate(
        |t| {
            let g = t.exp();
            Ok(-gamma_max * (t - d).exp_m1() / den * w(g) * g)
        },
        &[0.0, d],
        Tolerance::new(rel_tol)?.with_abs(1e-15),
    )?;
    Ok((q.value, q.abs_error))
}

/// `∫₁^{e^D} f''(γ) dγ`.
fn upper_integral(f: &ConvexFunction, d: f64) -> f64 {
    if d <= 0.0 {
        0.0
    } else if d.is_infinite() {
        f.upper_tail(1.0)
    } else {
        f.deriv(d.exp()) - f.deriv(1.0)
    }
}

/// `∫₁^{e^D} γ⁻³ f''(1/γ) dγ = f'(1) + (f − x f')(e^{−D})`.
fn lower_integral(f: &ConvexFunction, d: f64) -> f64 {
    if d <= 0.0 {
        0.0
    } else if d.is_infinite() {
        f.lower_tail(1.0)
    } else {
        let x = (-d).exp();
        (f.deriv(1.0) + f.eval(x) - x * f.deriv(x)).max(0.0)
    }
}

/// `D_f(ρ‖σ) ≤ ζ₁ E₁(ρ‖σ) ≤ ζ₂ E₁(ρ‖σ)`, with `ζ₁` the chord-weighted
/// integrals of `f''` up to the two `D_max` endpoints and `ζ₂` the plain ones.
pub fn reverse_pinsker_f(f: &ConvexFunction, rho: &DensityMatrix, sigma: &DensityMatrix, rel_tol: f64) -> Result<(BoundReport, BoundReport)> {
    let g = pair_data(rho, sigma)?;
    let lhs = d_f_integral(f, rho, sigma, rel_tol)?;
    let (a, ea) = chord_integral(|x| f.second(x), g.d1, f.upper_tail(1.0), rel_tol)?;
    let (b, eb) = chord_integral(|x| f.second(1.0 / x) / (x * x * x), g.d2, f.lower_tail(1.0), rel_tol)?;
    let zeta1 = a + b;
    let zeta2 = upper_integral(f, g.d1) + lower_integral(f, g.d2);
    let digest = Digest::new().function(f).state(rho).state(sigma).0;
    Ok((
        BoundReport::new("rev_pinsker_zeta1", BoundKind::Upper, lhs.value, wmul(g.e1, zeta1), lhs.abs_error + g.e1 * (ea + eb), digest),
        BoundReport::new("rev_pinsker_zeta2", BoundKind::Upper, lhs.value, wmul(g.e1, zeta2), lhs.abs_error, digest),
    ))
}

/// `D e^D/(e^D − 1)`, 1 at `D = 0`.
fn xe_over_expm1(d: f64) -> f64 {
    if d == 0.0 {
        1.0
    } else if d.is_infinite() {
        f64::INFINITY
    } else {
        d * d.exp() / d.exp_m1()
    }
}

/// `D/(1 − e^D)`, −1 at `D = 0` and 0 at `D = ∞`.
fn x_over_one_minus_exp(d: f64) -> f64 {
    if d == 0.0 {
        -1.0
    } else if d.is_infinite() {
        0.0
    } else {
        -d / d.exp_m1()
    }
}

/// The relative-entropy reverse Pinsker chain.
#[derive(Clone, Debug, PartialEq)]
pub struct KlReversePinsker {
    /// `(e^{D₁} D₁/(e^{D₁} − 1) + D₂/(1 − e^{D₂})) E₁`, the sharp form.
    pub sharp: BoundReport,
    /// `Ξ E₁` with the Thompson metric `Ξ = max(D₁, D₂)`.
    pub thompson: BoundReport,
    /// `(1 + D₁ − e^{−D₂}) E₁`.
    pub linear: BoundReport,
    /// `Ω E₁` with the Hilbert metric `Ω = D₁ + D₂`.
    pub omega: BoundReport,
}

impl KlReversePinsker {
    pub fn all(&self) -> [&BoundReport; 4] {
        [&self.sharp, &self.thompson, &self.linear, &self.omega]
    }
}

/// Closed-form reverse Pinsker bounds on the Umegaki relative entropy, with
/// `D₁ = D_max(ρ‖σ)` and `D₂ = D_max(σ‖ρ)`.
pub fn reverse_pinsker_kl(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<KlReversePinsker> {
    let g = pair_data(rho, sigma)?;
    let d = umegaki(rho, sigma)?;
    let digest = Digest::new().state(rho).state(sigma).0;
    let sharp = xe_over_expm1(g.d1) + x_over_one_minus_exp(g.d2);
    let report = |name, coeff: f64| BoundReport::new(name, BoundKind::Upper, d, wmul(g.e1, coeff), 0.0, digest);
    Ok(KlReversePinsker {
        sharp: report("new_rev_pin_0", sharp),
        thompson: report("new_rev_pin_thompson", g.d1.max(g.d2)),
        linear: report("new_rev_pin_1", 1.0 + g.d1 - (-g.d2).exp()),
        omega: report("new_rev_pin_omega", g.d1 + g.d2),
    })
}

/// `(α e^{(α−1)D₁} − (α − 1) e^{−α D₂} − 1)/(α − 1)`. Finite for `α < 1` even
/// when both `D_max` are infinite.
pub fn hellinger_reverse_pinsker_coefficient(alpha: f64, d1: f64, d2: f64) -> f64 {
    let a = if alpha > 1.0 && d1.is_infinite() { f64::INFINITY } else { alpha * ((alpha - 1.0) * d1).exp() };
    let b = (alpha - 1.0) * (-alpha * d2).exp();
    (a - b - 1.0) / (alpha - 1.0)
}

/// Reverse Pinsker bounds on `H_α` and on `D_α` derived from it.
pub fn reverse_pinsker_hellinger(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64, rel_tol: f64) -> Result<(BoundReport, BoundReport)> {
    let g = pair_data(rho, sigma)?;
    let h = h_alpha(rho, sigma, alpha, rel_tol)?;
    let bound = wmul(g.e1, hellinger_reverse_pinsker_coefficient(alpha, g.d1, g.d2));
    let digest = Digest::new().real(alpha).state(rho).state(sigma).0;
    let to_renyi = |x: f64| {
        let y = (alpha - 1.0) * x;
        if y <= -1.0 || y.is_infinite() {
            f64::INFINITY
        } else {
            y.ln_1p() / (alpha - 1.0)
        }
    };
    let d_alpha = if !h.is_finite() { f64::INFINITY } else { to_renyi(h.value) };
    let d_err = if h.is_finite() { h.abs_error / (1.0 + (alpha - 1.0) * h.value).abs() } else { 0.0 };
    Ok((
        BoundReport::new("hellinger_rev_pinsker", BoundKind::Upper, h.value, bound, h.abs_error, digest),
        BoundReport::new("renyi_rev_pinsker", BoundKind::Upper, d_alpha, to_renyi(bound), d_err, digest),
    ))
}

/// `F(ρ, σ) ≥ 1 − ½(2 − e^{−D₁/2} − e^{−D₂/2}) E₁(ρ‖σ)` for the root fidelity
/// `F = ‖√ρ√σ‖₁`.
pub fn fvdg_improved(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    let g = pair_data(rho, sigma)?;
    let f = fidelity(rho.op(), sigma.op())?;
    let rhs = 1.0 - 0.5 * (2.0 - (-0.5 * g.d1).exp() - (-0.5 * g.d2).exp()) * g.e1;
    Ok(BoundReport::new("fvdg_improved", BoundKind::Lower, f, rhs, 0.0, Digest::new().state(rho).state(sigma).0))
}

/// The earlier one-sided improvement `F ≥ 1 − e^{D₁/2}/(1 + e^{D₁/2}) E₁`.
/// Neither this nor [`fvdg_improved`] dominates the other.
pub fn fvdg_previous(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    let g = pair_data(rho, sigma)?;
    let f = fidelity(rho.op(), sigma.op())?;
    // e^{D/2}/(1 + e^{D/2}) as a logistic function
    let w = 1.0 / (1.0 + (-0.5 * g.d1).exp());
    let rhs = 1.0 - w * g.e1;
    Ok(BoundReport::new("fvdg_previous", BoundKind::Lower, f, rhs, 0.0, Digest::new().state(rho).state(sigma).0))
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `∫₁^{e^{D₁}} f''(s) ds + ∫₁^{e^{D₂}} s⁻² f''(1/s) ds = f'(e^{D₁}) − f'(e^{−D₂})`.
/// An infinite `D₂` gives an infinite (trivially valid) bound.
fn continuity_coefficient(f: &ConvexFunction, d1: f64, d2: f64) -> f64 {
    if d2.is_infinite() {
        return f64::INFINITY;
    }
    let first = upper_integral(f, d1);
    let second = if d2 <= 0.0 { 0.0 } else { (f.deriv(1.0) - f.deriv((-d2).exp())).max(0.0) };
    first + second
}

/// `D_f(ρ‖σ) − D_f(τ‖σ) ≤ (∫₁^{e^{D₁}} f'' + ∫₁^{e^{D₂}} s⁻² f''(1/s)) E₁(ρ‖τ)`
/// with `D₁ = D_max(ρ‖σ)`, `D₂ = D_max(σ‖ρ)`, plus the closed-form
/// specializations for `kl` (Hilbert metric and smallest eigenvalues), `js`
/// and Hellinger generators.
pub fn continuity_first_arg(f: &ConvexFunction, rho: &DensityMatrix, tau: &DensityMatrix, sigma: &DensityMatrix, rel_tol: f64) -> Result<Vec<BoundReport>> {
    check_same_dim(rho, tau)?;
    let g = pair_data(rho, sigma)?;
    let e1 = e_gamma(rho, tau, 1.0)?;
    let a = d_f_integral(f, rho, sigma, rel_tol)?;
    let b = d_f_integral(f, tau, sigma, rel_tol)?;
    let lhs = if a.value.is_infinite() && b.value.is_infinite() { f64::INFINITY } else { a.value - b.value };
    let err = a.abs_error + b.abs_error;
    let digest = Digest::new().function(f).state(rho).state(tau).state(sigma).0;
    let report = |name, coeff: f64| BoundReport::new(name, BoundKind::Upper, lhs, wmul(e1, coeff), err, digest);
    let mut out = vec![report("continuity_general", continuity_coefficient(f, g.d1, g.d2))];
    match f {
        ConvexFunction::Kl => {
            out.push(report("continuity_kl_omega", g.d1 + g.d2));
            let lmin = |s: &DensityMatrix| s.eigvalsh().map(|v| v[0].max(0.0));
            let (ls, lr) = (lmin(sigma)?, lmin(rho)?);
            let coeff = if ls > 0.0 && lr > 0.0 { -(ls.ln() + lr.ln()) } else { f64::INFINITY };
            out.push(report("continuity_kl_lambda_min", coeff));
        }
        ConvexFunction::Js => {
            let coeff = if g.d1.is_infinite() && g.d2.is_infinite() {
                f64::INFINITY
            } else if g.d1.is_infinite() {
                0.5 * softplus(g.d2)
            } else {
                0.5 * (g.d1 + softplus(g.d2) - softplus(g.d1))
            };
            out.push(report("continuity_js", coeff));
        }
        ConvexFunction::Hellinger { alpha } => {
            let alpha = *alpha;
            let up = if alpha > 1.0 && g.d1.is_infinite() { f64::INFINITY } else { ((alpha - 1.0) * g.d1).exp() };
            let down = if alpha < 1.0 && g.d2.is_infinite() { f64::INFINITY } else { ((1.0 - alpha) * g.d2).exp() };
            let coeff = if up.is_infinite() || down.is_infinite() { f64::INFINITY } else { alpha / (alpha - 1.0) * (up - down) };
            out.push(report("continuity_hellinger", coeff));
        }
        _ => {}
    }
    Ok(out)
}

fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(-rho.eigvalsh()?.iter().filter(|&&l| l > 0.0).map(|&l| l * l.ln()).sum::<f64>())
}

/// `|S(ρ) − S(σ)| ≤ ln max(λ_max(ρ)/λ_min(ρ), λ_max(σ)/λ_min(σ)) E₁(ρ‖σ)`.
pub fn entropy_continuity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<BoundReport> {
    check_same_dim(rho, sigma)?;
    let cond = |s: &DensityMatrix| -> Result<f64> {
        let v = s.eigvalsh()?;
        let (lo, hi) = (v[0], v[v.len() - 1]);
        Ok(if lo > 0.0 { hi / lo } else { f64::INFINITY })
    };
    let coeff = cond(rho)?.max(cond(sigma)?).ln();
    let lhs = (von_neumann_entropy(rho)? - von_neumann_entropy(sigma)?).abs();
    let e1 = e_gamma(rho, sigma, 1.0)?;
    Ok(BoundReport::new("entropy_continuity", BoundKind::Upper, lhs, wmul(e1, coeff), 0.0, Digest::new().state(rho).state(sigma).0))
}

/// Settings for [`amortized_bound`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmortizedConfig {
    pub optimizer: OptimizerConfig,
    /// Random input pairs on system ⊗ reference for the amortized side.
    pub n_samples: usize,
    pub rel_tol: f64,
}

impl Default for AmortizedConfig {
    fn default() -> Self {
        AmortizedConfig { optimizer: OptimizerConfig::default(), n_samples: 40, rel_tol: 1e-9 }
    }
}

/// Amortized bound together with its ingredients.
#[derive(Clone, Debug, PartialEq)]
pub struct AmortizedReport {
    pub report: BoundReport,
    pub xi: f64,
    /// Lower estimate of `E₁(𝓝‖𝓜)`, the diamond-norm distance.
    pub e1_estimate: f64,
    /// Pair attaining the sampled amortized value.
    pub witness: Option<(DensityMatrix, DensityMatrix)>,
}

fn ensure_same_shape(n: &QuantumChannel, m: &QuantumChannel) -> Result<()> {
    if n.dim_in() != m.dim_in() {
        return Err(Error::DimensionMismatch { expected: n.dim_in(), found: m.dim_in() });
    }
    if n.dim_out() != m.dim_out() {
        return Err(Error::DimensionMismatch { expected: n.dim_out(), found: m.dim_out() });
    }
    Ok(())
}

/// Lower estimate of `E₁(𝓝‖𝓜) = sup_ψ E₁((𝓝⊗id)(ψ)‖(𝓜⊗id)(ψ))` over pure
/// inputs with a reference system of the input dimension.
pub fn diamond_e1_estimate(n: &QuantumChannel, m: &QuantumChannel, cfg: &OptimizerConfig) -> Result<(f64, DensityMatrix)> {
    ensure_same_shape(n, m)?;
    let r = n.dim_in();
    let (nr, mr) = (n.tensor_identity(r)?, m.tensor_identity(r)?);
    let dim = r * r;
    let objective = |x: &[f64]| -> Result<f64> {
        match unit_vector(x) {
            Some(psi) => {
                let state = DensityMatrix::pure(&psi)?;
                e_gamma(&nr.apply(&state)?, &mr.apply(&state)?, 1.0)
            }
            None => Ok(0.0),
        }
    };
    let best = maximize(objective, 2 * dim, cfg)?;
    let psi = unit_vector(&best.point).ok_or_else(|| Error::Domain("degenerate optimizer output".into()))?;
    Ok((best.value, DensityMatrix::pure(&psi)?))
}

/// `D^A_f(𝓝‖𝓜) ≤ ξ(f) E₁(𝓝‖𝓜)` with `ξ(f) = ∫₁^∞ f''(γ) + γ⁻³ f''(1/γ) dγ`.
///
/// The left side is a sampled lower bound on the amortized divergence,
/// `max D_f((𝓝⊗id)(ρ)‖(𝓜⊗id)(σ)) − D_f(ρ‖σ)`, over seeded pairs and the
/// diamond-norm witness. The diamond-norm estimate is the larger of the
/// optimizer value and `E₁((𝓝⊗id)(ρ)‖(𝓜⊗id)(ρ))` at every sampled input.
pub fn amortized_bound(f: &ConvexFunction, m: &QuantumChannel, n: &QuantumChannel, cfg: &AmortizedConfig) -> Result<AmortizedReport> {
    ensure_same_shape(n, m)?;
    let xi = f.xi();
    if !xi.is_finite() {
        return Err(Error::Domain(format!("ξ({f}) diverges, so no amortized bound exists")));
    }
    let (opt_e1, psi) = diamond_e1_estimate(n, m, &cfg.optimizer)?;
    let r = n.dim_in();
    let (nr, mr) = (n.tensor_identity(r)?, m.tensor_identity(r)?);
    let dim = r * r;
    let mut pairs = vec![(psi.clone(), psi)];
    for i in 0..cfg.n_samples {
        let base = cfg.optimizer.seed.wrapping_mul(0x5851_F42D).wrapping_add(2 * i as u64);
        let rho = random_density(dim, dim, base)?;
        if i % 2 == 0 {
            pairs.push((rho.clone(), rho));
        } else {
            pairs.push((rho, random_density(dim, dim, base + 1)?));
        }
    }
    let mut e1 = opt_e1;
    let mut lhs = f64::NEG_INFINITY;
    let mut err = 0.0;
    let mut witness = None;
    for (rho, sigma) in pairs {
        let (out_rho, out_sigma) = (nr.apply(&rho)?, mr.apply(&sigma)?);
        e1 = e1.max(e_gamma(&out_rho, &mr.apply(&rho)?, 1.0)?).max(e_gamma(&nr.apply(&sigma)?, &out_sigma, 1.0)?);
        let through = d_f_integral(f, &out_rho, &out_sigma, cfg.rel_tol)?;
        let before: DivergenceValue = d_f_integral(f, &rho, &sigma, cfg.rel_tol)?;
        if !through.is_finite() || !before.is_finite() {
            continue;
        }
        let v = through.value - before.value;
        if v > lhs {
            lhs = v;
            err = through.abs_error + before.abs_error;
            witness = Some((rho, sigma));
        }
    }
    let digest = Digest::new().function(f).channel(m).channel(n).real(cfg.optimizer.seed as f64).0;
    let report = BoundReport::new("amortized", BoundKind::Upper, lhs, xi * e1, err, digest);
    Ok(AmortizedReport { report, xi, e1_estimate: e1, witness })
}
