//! Quantum differential privacy: `(ε, δ)`-DP checks over explicit neighbor
//! pairs, the local-DP contraction factor and DP-specialized bounds.

use alloc::format;
use alloc::vec::Vec;

use crate::bounds::{BoundKind, BoundReport, Digest};
use crate::fdiv::{d_f_integral, umegaki, ConvexFunction};
use crate::hockey::{d_max, e_gamma};
use crate::states::{check_same_dim, DensityMatrix, QuantumChannel};
use crate::{Error, Result};

/// Allowance for roundoff in `E_{e^ε} ≤ δ` and `D_max ≤ ε`.
pub const DP_TOL: f64 = 1e-12;

/// Neighboring input pairs. The relation is treated as symmetric: every pair
/// is checked in both orders.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborSet {
    pairs: Vec<(DensityMatrix, DensityMatrix)>,
}

impl NeighborSet {
    pub fn new(pairs: Vec<(DensityMatrix, DensityMatrix)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Domain("neighbor set is empty".into()));
        }
        let d = pairs[0].0.dim();
        for (a, b) in &pairs {
            if a.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: a.dim() });
            }
            check_same_dim(a, b)?;
        }
        Ok(NeighborSet { pairs })
    }

    /// Every unordered pair drawn from `states`.
    pub fn all_pairs(states: &[DensityMatrix]) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, a) in states.iter().enumerate() {
            for b in &states[i + 1..] {
                pairs.push((a.clone(), b.clone()));
            }
        }
        Self::new(pairs)
    }

    pub fn pairs(&self) -> &[(DensityMatrix, DensityMatrix)] {
        &self.pairs
    }

    pub fn dim(&self) -> usize {
        self.pairs[0].0.dim()
    }

    /// Ordered pairs of the symmetric closure.
    pub fn ordered(&self) -> impl Iterator<Item = (&DensityMatrix, &DensityMatrix)> {
        self.pairs.iter().flat_map(|(a, b)| [(a, b), (b, a)])
    }
}

/// The `δ = 0` criterion `sup D_max(𝒜(ρ)‖𝒜(σ)) ≤ ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DmaxCriterion {
    pub worst_dmax: f64,
    pub passes: bool,
    /// Whether this criterion and the hockey-stick criterion agree.
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DpReport {
    pub eps: f64,
    pub delta: f64,
    /// `max E_{e^ε}(𝒜(ρ)‖𝒜(σ))` over ordered neighbor pairs.
    pub worst_e: f64,
    pub passes: bool,
    /// Ordered pair attaining `worst_e`.
    pub worst_pair: (DensityMatrix, DensityMatrix),
    /// Present only for `δ = 0`.
    pub dmax: Option<DmaxCriterion>,
}

fn validate_privacy(eps: f64, delta: f64) -> Result<()> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("ε must be non-negative, got {eps}")));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::Domain(format!("δ must lie in [0, 1], got {delta}")));
    }
    Ok(())
}

/// `(ε, δ)`-DP check: `sup_{ρ∼σ} E_{e^ε}(𝒜(ρ)‖𝒜(σ)) ≤ δ`.
pub fn check_dp(channel: &QuantumChannel, neighbors: &NeighborSet, eps: f64, delta: f64) -> Result<DpReport> {
    validate_privacy(eps, delta)?;
    if neighbors.dim() != channel.dim_in() {
        return Err(Error::DimensionMismatch { expected: channel.dim_in(), found: neighbors.dim() });
    }
    let gamma = eps.exp();
    let mut worst_e = f64::NEG_INFINITY;
    let mut worst_dmax = f64::NEG_INFINITY;
    let mut worst_pair = None;
    for (a, b) in neighbors.ordered() {
        let (out_a, out_b) = (channel.apply(a)?, channel.apply(b)?);
        let e = e_gamma(&out_a, &out_b, gamma)?;
        if e > worst_e {
            worst_e = e;
            worst_pair = Some((a.clone(), b.clone()));
        }
        if delta == 0.0 {
            worst_dmax = worst_dmax.max(d_max(&out_a, &out_b)?);
        }
    }
    let passes = worst_e <= delta + DP_TOL;
    let dmax = (delta == 0.0).then(|| {
        let ok = worst_dmax <= eps + DP_TOL;
        DmaxCriterion { worst_dmax, passes: ok, agrees: ok == passes }
    });
    Ok(DpReport { eps, delta, worst_e, passes, worst_pair: worst_pair.expect("neighbor set is nonempty"), dmax })
}

/// `φ(ε, δ) = 1 − e^{−ε}(1 − δ)`, the trace-distance contraction bound of
/// `(ε, δ)`-LDP channels.
pub fn phi(eps: f64, delta: f64) -> Result<f64> {
    validate_privacy(eps, delta)?;
    Ok(1.0 - (-eps).exp() * (1.0 - delta))
}

/// Smallest `δ` for which `depolarizing(p, τ₂)` is `(ε, δ)`-DP on orthogonal
/// pure qubit neighbors: `max(0, 1 − p/2 − e^ε p/2)`.
pub fn depolarizing_qubit_delta(p: f64, eps: f64) -> f64 {
    (1.0 - 0.5 * p - eps.exp() * 0.5 * p).max(0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LdpReport {
    /// `D_f(𝒜(ρ)‖𝒜(σ)) ≤ φ(ε, δ) D_f(ρ‖σ)`.
    pub report: BoundReport,
    pub phi: f64,
    /// `φ(ε, δ) D(ρ‖σ)`, the Stein-exponent cap for hypothesis testing after
    /// the channel.
    pub stein_converse_rate: f64,
}

/// Contraction of `D_f` under an `(ε, δ)`-LDP channel. Local privacy is
/// checked over every pair drawn from `ldp_samples` (pure states are
/// extremal), so a pass is sampled evidence and a failure is definite.
#[allow(clippy::too_many_arguments)]
pub fn ldp_divergence_bound(
    f: &ConvexFunction,
    channel: &QuantumChannel,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    eps: f64,
    delta: f64,
    ldp_samples: &[DensityMatrix],
    rel_tol: f64,
) -> Result<LdpReport> {
    let factor = phi(eps, delta)?;
    let check = check_dp(channel, &NeighborSet::all_pairs(ldp_samples)?, eps, delta)?;
    if !check.passes {
        return Err(Error::Precondition(format!(
            "channel is not ({eps}, {delta})-LDP: E_(e^ε) = {} at witness pair {:?}",
            check.worst_e, check.worst_pair
        )));
    }
    let digest = Digest::new().function(f).channel(channel).state(rho).state(sigma).real(eps).real(delta).0;
    let (out_rho, out_sigma) = (channel.apply(rho)?, channel.apply(sigma)?);
    let lhs = d_f_integral(f, &out_rho, &out_sigma, rel_tol)?;
    let before = d_f_integral(f, rho, sigma, rel_tol)?;
    let rhs = if factor == 0.0 { 0.0 } else { factor * before.value };
    let report = BoundReport::new("ldp_contraction", BoundKind::Upper, lhs.value, rhs, lhs.abs_error + factor * before.abs_error, digest);
    let d = umegaki(rho, sigma)?;
    let stein_converse_rate = if factor == 0.0 { 0.0 } else { factor * d };
    Ok(LdpReport { report, phi: factor, stein_converse_rate })
}

/// For an `ε`-DP channel and each neighbor pair:
/// `D(𝒜(ρ)‖𝒜(σ)) ≤ ε E₁(𝒜(ρ)‖𝒜(σ))` and, for each `τ`,
/// `D(𝒜(ρ)‖𝒜(σ)) − D(τ‖𝒜(σ)) ≤ 2ε E₁(𝒜(ρ)‖τ)`.
pub fn dp_shortcut_bounds(channel: &QuantumChannel, neighbors: &NeighborSet, eps: f64, taus: &[DensityMatrix]) -> Result<Vec<BoundReport>> {
    let check = check_dp(channel, neighbors, eps, 0.0)?;
    if !check.passes {
        return Err(Error::Precondition(format!("channel is not {eps}-DP on the neighbor set: E_(e^ε) = {}", check.worst_e)));
    }
    let mut out = Vec::new();
    for (a, b) in neighbors.ordered() {
        let (out_a, out_b) = (channel.apply(a)?, channel.apply(b)?);
        let d = umegaki(&out_a, &out_b)?;
        let e1 = e_gamma(&out_a, &out_b, 1.0)?;
        let digest = Digest::new().channel(channel).state(a).state(b).real(eps);
        out.push(BoundReport::new("dp_pinsker", BoundKind::Upper, d, eps * e1, 0.0, digest.0));
        for tau in taus {
            check_same_dim(tau, &out_b)?;
            let lhs = d - umegaki(tau, &out_b)?;
            let rhs = 2.0 * eps * e_gamma(&out_a, tau, 1.0)?;
            out.push(BoundReport::new("dp_continuity", BoundKind::Upper, lhs, rhs, 0.0, digest.state(tau).0));
        }
    }
    Ok(out)
}
