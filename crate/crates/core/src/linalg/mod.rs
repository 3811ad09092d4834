//! Dense complex matrices, Hermitian operators and spectral functions.
//!
//! Storage is row-major `Vec<C64>`. Dimensions in this crate are small (the
//! tensor-power guard caps them at 4096), so everything is plain `O(n³)`.

mod eigen;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::Float;

use crate::{Error, Result};

pub use eigen::{eigh, eigvalsh};

pub type C64 = Complex<f64>;

/// Largest dimension any operator built by this crate may have.
pub const MAX_DIM: usize = 4096;

/// Eigenvalues at or below `SUPPORT_RTOL · λ_max` are treated as zero.
pub const SUPPORT_RTOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Row-major data; `data.len()` must equal `rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self · other†` without forming the adjoint.
    pub fn matmul_adjoint(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let arow = &self.data[i * self.cols..(i + 1) * self.cols];
            for j in 0..other.rows {
                let brow = &other.data[j * other.cols..(j + 1) * other.cols];
                let mut acc = C64::new(0.0, 0.0);
                for (a, b) in arow.iter().zip(brow) {
                    acc += a * b.conj();
                }
                out.data[i * other.rows + j] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(C64, C64) -> C64) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Matrix::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A square matrix equal to its adjoint. Construction symmetrizes the input
/// as `(A + A†)/2`, so small asymmetries from upstream arithmetic are removed
/// rather than rejected.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    m: Matrix,
}

impl HermitianOperator {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(mut m: Matrix) -> Self {
        let n = m.rows;
        for i in 0..n {
            m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        HermitianOperator { m }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        HermitianOperator {
            m: Matrix::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) }),
        }
    }

    /// Row-major real symmetric input.
    pub fn from_real(n: usize, data: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_real(n, n, data)?)
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator { m: Matrix::identity(n) }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianOperator { m: Matrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.m.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix {
        self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator { m: self.m.scale(C64::new(s, 0.0)) }
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianOperator { m: self.m.add(&other.m) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        HermitianOperator { m: self.m.sub(&other.m) }
    }

    /// `a·self + b·other`.
    pub fn lincomb(a: f64, x: &Self, b: f64, y: &Self) -> Self {
        HermitianOperator { m: x.m.zip_with(&y.m, |p, q| p * a + q * b) }
    }

    /// `K · self · K†` for a (possibly rectangular) `K`.
    pub fn congruence(&self, k: &Matrix) -> Self {
        Self::symmetrized(k.matmul(&self.m).matmul_adjoint(k))
    }

    pub fn tensor(&self, other: &Self) -> Self {
        HermitianOperator { m: self.m.kron(&other.m) }
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.m[(i, j)].norm() <= tol))
    }

    pub fn eigh(&self) -> Result<Spectrum> {
        eigh(self)
    }

    pub fn eigvalsh(&self) -> Result<Vec<f64>> {
        eigvalsh(self)
    }

    /// Applies `f` to every eigenvalue.
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Ok(self.eigh()?.reconstruct(f))
    }
}

/// Eigen-decomposition `H = V diag(values) V†` with ascending eigenvalues.
/// Each eigenvector has its largest-magnitude component real and positive.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Threshold below which eigenvalues count as zero.
    pub fn support_threshold(&self) -> f64 {
        SUPPORT_RTOL * self.max_abs()
    }

    /// `V diag(f(λ)) V†`.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let n = self.dim();
        let w: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            if w[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * w[k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += a * v[(j, k)].conj();
                }
            }
        }
        HermitianOperator::symmetrized(m)
    }

    /// `V diag(f(λ)) V†` with `f` applied only on the support (|λ| above the
    /// threshold) and zero elsewhere.
    pub fn reconstruct_on_support(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let tol = self.support_threshold();
        self.reconstruct(|l| if l > tol { f(l) } else { 0.0 })
    }
}

/// `Tr(H)_+`, the sum of the positive eigenvalues.
pub fn positive_part_trace(h: &HermitianOperator) -> Result<f64> {
    Ok(eigvalsh(h)?.iter().filter(|&&l| l > 0.0).sum())
}

/// Trace norm `Σ|λ_i|`.
pub fn trace_norm(h: &HermitianOperator) -> Result<f64> {
    Ok(eigvalsh(h)?.iter().map(|l| l.abs()).sum())
}

/// Kronecker product with the dimension guard applied.
pub fn tensor(a: &HermitianOperator, b: &HermitianOperator) -> Result<HermitianOperator> {
    let dim = a.dim() * b.dim();
    if dim > MAX_DIM {
        return Err(Error::TooLarge { dim, limit: MAX_DIM });
    }
    Ok(a.tensor(b))
}

/// Projector onto eigenvectors with eigenvalue above `tol · λ_max`.
pub fn support_projector(h: &HermitianOperator, tol: f64) -> Result<HermitianOperator> {
    let s = eigh(h)?;
    let cut = tol * s.max_abs();
    Ok(s.reconstruct(|l| if l > cut { 1.0 } else { 0.0 }))
}

fn check_psd(s: &Spectrum) -> Result<()> {
    let min = s.values.first().copied().unwrap_or(0.0);
    if min < -PSD_ATOL.max(1e-9 * s.max_abs()) {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(())
}

/// Absolute tolerance on negative eigenvalues of operators declared PSD.
pub const PSD_ATOL: f64 = 1e-10;

/// Natural logarithm on the support of a PSD operator (zero on the kernel).
pub fn matrix_log(h: &HermitianOperator) -> Result<HermitianOperator> {
    let s = eigh(h)?;
    check_psd(&s)?;
    Ok(s.reconstruct_on_support(|l| l.ln()))
}

/// `H^t` for PSD `H`. Negative and zero exponents act on the support only,
/// so `matrix_power(H, -1)` is the Moore–Penrose pseudo-inverse.
pub fn matrix_power(h: &HermitianOperator, t: f64) -> Result<HermitianOperator> {
    let s = eigh(h)?;
    check_psd(&s)?;
    Ok(s.reconstruct_on_support(|l| l.powf(t)))
}

/// `H^{-1/2}` on the support of a PSD operator.
pub fn pseudo_inverse_sqrt(h: &HermitianOperator) -> Result<HermitianOperator> {
    matrix_power(h, -0.5)
}

/// `‖√A √B‖₁ = Tr √(√A B √A)` for PSD operators.
pub fn fidelity(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    let ra = matrix_power(a, 0.5)?;
    let inner = b.congruence(ra.matrix());
    let vals = eigvalsh(&inner)?;
    // eigenvalues at roundoff level would contribute their square root
    let noise = 8.0 * f64::EPSILON * a.dim() as f64 * a.trace().abs().max(0.0) * b.trace().abs();
    Ok(vals.iter().filter(|&&l| l > noise).map(|&l| l.sqrt()).sum())
}
