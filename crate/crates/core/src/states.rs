//! Density matrices, Kraus channels, classical-quantum states and seeded
//! random generators for all of them.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, HermitianOperator, Matrix, C64, MAX_DIM, PSD_ATOL};
use crate::{Error, Result};

/// Maximum deviation of the trace from 1 accepted on validation.
pub const TRACE_TOL: f64 = 1e-8;

/// Tolerance on `Σ K†K = I` for Kraus operators.
pub const KRAUS_TOL: f64 = 1e-9;

/// Deterministic RNG for a seed. Every randomized routine in the crate goes
/// through this.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn complex_normal(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// A positive semidefinite operator of unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
}

impl DensityMatrix {
    /// Validates positivity (eigenvalues ≥ −1e-10, small negatives clamped)
    /// and unit trace (within 1e-8).
    pub fn new(op: HermitianOperator) -> Result<Self> {
        validate_density(op)
    }

    pub fn from_matrix(m: Matrix) -> Result<Self> {
        validate_density(HermitianOperator::new(m)?)
    }

    pub fn from_real_diagonal(p: &[f64]) -> Result<Self> {
        validate_density(HermitianOperator::from_real_diagonal(p))
    }

    /// Row-major real symmetric entries.
    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        validate_density(HermitianOperator::from_real(n, data)?)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix { op: HermitianOperator::identity(d).scale(1.0 / d as f64) }
    }

    /// `|ψ⟩⟨ψ|` for the normalized `ψ`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain(format!("state vector norm {norm}")));
        }
        let n = psi.len();
        let m = Matrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Ok(DensityMatrix { op: HermitianOperator::symmetrized(m) })
    }

    /// Wraps an operator already known to be a state (outputs of channels,
    /// mixtures and tensor products of states).
    pub(crate) fn new_unchecked(op: HermitianOperator) -> Self {
        DensityMatrix { op }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn eigvalsh(&self) -> Result<Vec<f64>> {
        self.op.eigvalsh()
    }

    /// `λ·self + (1 − λ)·other` for `λ ∈ [0, 1]`.
    pub fn mix(&self, lambda: f64, other: &DensityMatrix) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Domain(format!("mixing weight {lambda} outside [0, 1]")));
        }
        check_same_dim(self, other)?;
        Ok(DensityMatrix { op: HermitianOperator::lincomb(lambda, &self.op, 1.0 - lambda, &other.op) })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix { op: linalg::tensor(&self.op, &other.op)? })
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &Matrix) -> DensityMatrix {
        DensityMatrix { op: self.op.congruence(u) }
    }
}

pub(crate) fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(())
}

/// See [`DensityMatrix::new`].
pub fn validate_density(op: HermitianOperator) -> Result<DensityMatrix> {
    let s = op.eigh()?;
    let min = s.values.first().copied().unwrap_or(0.0);
    if min < -PSD_ATOL {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let trace = op.trace();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceMismatch { trace });
    }
    let mut op = if min < 0.0 { s.reconstruct(|l| l.max(0.0)) } else { op };
    let t = op.trace();
    if (t - 1.0).abs() > 1e-12 {
        op = op.scale(1.0 / t);
    }
    Ok(DensityMatrix { op })
}

/// `rank` columns of i.i.d. complex Gaussians `G`, normalized `GG†/Tr GG†`.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::Domain(format!("need 1 ≤ rank ≤ dim, got rank {rank}, dim {dim}")));
    }
    let mut rng = seeded_rng(seed);
    let g = Matrix::from_fn(dim, rank, |_, _| complex_normal(&mut rng));
    let gg = g.matmul_adjoint(&g);
    let t = gg.trace().re;
    Ok(DensityMatrix { op: HermitianOperator::symmetrized(gg.scale(C64::new(1.0 / t, 0.0))) })
}

pub fn random_pure(dim: usize, seed: u64) -> Result<DensityMatrix> {
    random_density(dim, 1, seed)
}

/// Orthonormalizes the columns of `g` in place (modified Gram–Schmidt). With
/// Gaussian input this yields Haar-distributed isometries, because the implied
/// `R` factor has a positive diagonal.
fn orthonormalize_columns(g: &mut Matrix) {
    let (rows, cols) = (g.rows(), g.cols());
    for j in 0..cols {
        for k in 0..j {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..rows {
                dot += g[(i, k)].conj() * g[(i, j)];
            }
            for i in 0..rows {
                let gik = g[(i, k)];
                g[(i, j)] -= gik * dot;
            }
        }
        let norm = (0..rows).map(|i| g[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..rows {
            g[(i, j)] /= norm;
        }
    }
}

/// Haar-random unitary.
pub fn random_unitary(dim: usize, seed: u64) -> Matrix {
    let mut rng = seeded_rng(seed);
    let mut g = Matrix::from_fn(dim, dim, |_, _| complex_normal(&mut rng));
    orthonormalize_columns(&mut g);
    g
}

/// A channel given by Kraus operators `K_i : C^{dim_in} → C^{dim_out}` with
/// `Σ K_i† K_i = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<Matrix>,
}

impl QuantumChannel {
    pub fn new(dim_in: usize, dim_out: usize, kraus: Vec<Matrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::Precondition("a channel needs at least one Kraus operator".into()));
        }
        let mut sum = Matrix::zeros(dim_in, dim_in);
        for k in &kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::DimensionMismatch { expected: dim_out * dim_in, found: k.rows() * k.cols() });
            }
            if !k.is_finite() {
                return Err(Error::NonFinite);
            }
            sum = sum.add(&k.adjoint().matmul(k));
        }
        let dev = sum.max_abs_diff(&Matrix::identity(dim_in));
        if dev > KRAUS_TOL {
            return Err(Error::Precondition(format!("Kraus operators are not trace preserving (deviation {dev:e})")));
        }
        Ok(QuantumChannel { dim_in, dim_out, kraus })
    }

    pub fn identity(d: usize) -> Self {
        QuantumChannel { dim_in: d, dim_out: d, kraus: vec![Matrix::identity(d)] }
    }

    pub fn unitary(u: Matrix) -> Result<Self> {
        let d = u.rows();
        Self::new(d, d, vec![u])
    }

    /// `ρ ↦ Tr(ρ)·σ`.
    pub fn constant(dim_in: usize, sigma: &DensityMatrix) -> Result<Self> {
        let s = sigma.op().eigh()?;
        let tol = s.support_threshold();
        let d = sigma.dim();
        let mut kraus = Vec::new();
        for k in 0..d {
            let sk = s.values[k];
            if sk <= tol {
                continue;
            }
            for j in 0..dim_in {
                kraus.push(Matrix::from_fn(d, dim_in, |r, c| if c == j { s.vectors[(r, k)] * sk.sqrt() } else { C64::new(0.0, 0.0) }));
            }
        }
        Self::new(dim_in, d, kraus)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[Matrix] {
        &self.kraus
    }

    /// `Σ K X K†` for an arbitrary square input (not necessarily Hermitian).
    pub fn apply_matrix(&self, x: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = out.add(&k.matmul(x).matmul_adjoint(k));
        }
        out
    }

    pub fn apply_op(&self, x: &HermitianOperator) -> HermitianOperator {
        HermitianOperator::symmetrized(self.apply_matrix(x.matrix()))
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch { expected: self.dim_in, found: rho.dim() });
        }
        Ok(DensityMatrix::new_unchecked(self.apply_op(rho.op())))
    }

    /// `𝒜 ⊗ id_R` with a reference system of dimension `ref_dim`.
    pub fn tensor_identity(&self, ref_dim: usize) -> Result<Self> {
        let dim = self.dim_in.max(self.dim_out) * ref_dim;
        if dim > MAX_DIM {
            return Err(Error::TooLarge { dim, limit: MAX_DIM });
        }
        let id = Matrix::identity(ref_dim);
        Ok(QuantumChannel {
            dim_in: self.dim_in * ref_dim,
            dim_out: self.dim_out * ref_dim,
            kraus: self.kraus.iter().map(|k| k.kron(&id)).collect(),
        })
    }

    /// `𝒩 ∘ self`.
    pub fn then(&self, next: &QuantumChannel) -> Result<Self> {
        if next.dim_in != self.dim_out {
            return Err(Error::DimensionMismatch { expected: self.dim_out, found: next.dim_in });
        }
        let mut kraus = Vec::new();
        for b in &next.kraus {
            for a in &self.kraus {
                kraus.push(b.matmul(a));
            }
        }
        Ok(QuantumChannel { dim_in: self.dim_in, dim_out: next.dim_out, kraus })
    }
}

pub fn apply_channel(channel: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    channel.apply(rho)
}

/// Stinespring construction from a Haar-random isometry
/// `V : C^{dim_in} → C^{dim_out} ⊗ C^{env_dim}`; Kraus operators are
/// `K_e = (I ⊗ ⟨e|) V`.
pub fn random_channel(dim_in: usize, dim_out: usize, env_dim: usize, seed: u64) -> Result<QuantumChannel> {
    if dim_in == 0 || dim_out == 0 || env_dim == 0 {
        return Err(Error::Domain("channel dimensions must be positive".into()));
    }
    if dim_out * env_dim < dim_in {
        return Err(Error::Domain(format!(
            "an isometry needs dim_out·env_dim ≥ dim_in ({dim_out}·{env_dim} < {dim_in})"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut v = Matrix::from_fn(dim_out * env_dim, dim_in, |_, _| complex_normal(&mut rng));
    orthonormalize_columns(&mut v);
    let kraus = (0..env_dim)
        .map(|e| Matrix::from_fn(dim_out, dim_in, |i, j| v[(i * env_dim + e, j)]))
        .collect();
    QuantumChannel::new(dim_in, dim_out, kraus)
}

/// `𝒟_{p,σ}(ρ) = (1 − p)ρ + p·Tr(ρ)·σ`.
pub fn depolarizing(p: f64, sigma: &DensityMatrix) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("depolarizing parameter {p} outside [0, 1]")));
    }
    let d = sigma.dim();
    let mut kraus = Vec::new();
    if p < 1.0 {
        kraus.push(Matrix::identity(d).scale(C64::new((1.0 - p).sqrt(), 0.0)));
    }
    if p > 0.0 {
        let s = sigma.op().eigh()?;
        let tol = s.support_threshold();
        for k in 0..d {
            let w = p * s.values[k];
            if s.values[k] <= tol {
                continue;
            }
            for j in 0..d {
                kraus.push(Matrix::from_fn(d, d, |r, c| if c == j { s.vectors[(r, k)] * w.sqrt() } else { C64::new(0.0, 0.0) }));
            }
        }
    }
    QuantumChannel::new(d, d, kraus)
}

/// `ρ^{⊗n}` with the dimension guard applied before any allocation.
pub fn tensor_power(rho: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::Domain("tensor power needs n ≥ 1".into()));
    }
    let mut dim: usize = 1;
    for _ in 0..n {
        dim = dim.saturating_mul(rho.dim());
    }
    if dim > MAX_DIM {
        return Err(Error::TooLarge { dim, limit: MAX_DIM });
    }
    let mut out = rho.clone();
    for _ in 1..n {
        out = out.tensor(rho)?;
    }
    Ok(out)
}

/// An ensemble `{p(u), ρ^u}`.
#[derive(Clone, Debug)]
pub struct CQState {
    probs: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl CQState {
    pub fn new(probs: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.is_empty() || probs.len() != states.len() {
            return Err(Error::DimensionMismatch { expected: probs.len(), found: states.len() });
        }
        if probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::Domain("probabilities must be non-negative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("probabilities sum to {total}")));
        }
        let d = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
        }
        Ok(CQState { probs, states })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// `ρ̄ = Σ p(u) ρ^u`.
    pub fn average(&self) -> DensityMatrix {
        let mut acc = HermitianOperator::zeros(self.dim());
        for (p, s) in self.probs.iter().zip(&self.states) {
            acc = acc.add(&s.op().scale(*p));
        }
        DensityMatrix::new_unchecked(acc)
    }

    /// `diag(p) ⊗ ρ̄`, the product of the marginals.
    pub fn product_of_marginals(&self) -> Result<DensityMatrix> {
        let bar = self.average();
        let blocks: Vec<DensityMatrix> = self.probs.iter().map(|_| bar.clone()).collect();
        block_diagonal(&self.probs, &blocks)
    }
}

/// `Σ_u p(u) |u⟩⟨u| ⊗ ρ^u` as a block-diagonal density matrix.
pub fn cq_embed(cq: &CQState) -> Result<DensityMatrix> {
    block_diagonal(&cq.probs, &cq.states)
}

fn block_diagonal(weights: &[f64], blocks: &[DensityMatrix]) -> Result<DensityMatrix> {
    let d = blocks[0].dim();
    let n = d * blocks.len();
    if n > MAX_DIM {
        return Err(Error::TooLarge { dim: n, limit: MAX_DIM });
    }
    let mut m = Matrix::zeros(n, n);
    for (u, (w, b)) in weights.iter().zip(blocks).enumerate() {
        for i in 0..d {
            for j in 0..d {
                m[(u * d + i, u * d + j)] = b.op().entry(i, j) * *w;
            }
        }
    }
    Ok(DensityMatrix::new_unchecked(HermitianOperator::symmetrized(m)))
}

/// `Tr_B` of an operator on `C^{da} ⊗ C^{db}`.
pub fn partial_trace_second(x: &HermitianOperator, da: usize, db: usize) -> Result<HermitianOperator> {
    if x.dim() != da * db {
        return Err(Error::DimensionMismatch { expected: da * db, found: x.dim() });
    }
    let m = Matrix::from_fn(da, da, |i, j| (0..db).map(|k| x.entry(i * db + k, j * db + k)).sum());
    Ok(HermitianOperator::symmetrized(m))
}
