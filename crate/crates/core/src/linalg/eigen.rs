//! Hermitian eigensolver: Householder reduction to tridiagonal form, a
//! diagonal phase change that makes the off-diagonal real, then implicit QL
//! (`tql2`) on the real symmetric tridiagonal.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::{HermitianOperator, Matrix, Spectrum, C64};
use crate::{Error, Result};

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

struct Tridiagonal {
    d: Vec<f64>,
    /// `e[i]` couples rows `i` and `i + 1`; `e[n-1] = 0`.
    e: Vec<f64>,
    /// `Q·D`, the unitary taking the real tridiagonal back to the input basis.
    basis: Option<Matrix>,
}

fn tridiagonalize(h: &HermitianOperator, want_basis: bool) -> Tridiagonal {
    let n = h.dim();
    let mut a = h.matrix().clone();
    let mut q = if want_basis { Some(Matrix::identity(n)) } else { None };
    let mut sub = vec![C64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<C64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            sub[k] = x[0];
            continue;
        }
        let x0n = x[0].norm();
        let phase = if x0n > 0.0 { x[0] / x0n } else { C64::new(1.0, 0.0) };
        let mut v = x.clone();
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        sub[k] = -phase * xnorm;

        // Trailing block update A' = A − 2(v u† + u v†), u = Av − (v†Av) v.
        let mut w = vec![C64::new(0.0, 0.0); m];
        for i in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..m {
                acc += a[(k + 1 + i, k + 1 + j)] * v[j];
            }
            w[i] = acc;
        }
        let c: f64 = v.iter().zip(&w).map(|(vi, wi)| (vi.conj() * wi).re).sum();
        let u: Vec<C64> = w.iter().zip(&v).map(|(wi, vi)| wi - vi * c).collect();
        for i in 0..m {
            for j in 0..m {
                let delta = (v[i] * u[j].conj() + u[i] * v[j].conj()) * 2.0;
                a[(k + 1 + i, k + 1 + j)] -= delta;
            }
        }
        if let Some(q) = q.as_mut() {
            for r in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..m {
                    acc += q[(r, k + 1 + j)] * v[j];
                }
                acc *= 2.0;
                for j in 0..m {
                    q[(r, k + 1 + j)] -= acc * v[j].conj();
                }
            }
        }
    }
    if n >= 2 {
        sub[n - 2] = a[(n - 1, n - 2)];
    }

    let d: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for i in 0..n.saturating_sub(1) {
        let r = sub[i].norm();
        e[i] = r;
        phases[i + 1] = if r > 0.0 { phases[i] * (sub[i] / r) } else { phases[i] };
    }
    let basis = q.map(|mut q| {
        for r in 0..n {
            for c in 0..n {
                q[(r, c)] *= phases[c];
            }
        }
        q
    });
    Tridiagonal { d, e, basis }
}

/// Implicit QL with Wilkinson-style shifts (EISPACK `tql2`). On return `d`
/// holds the eigenvalues in ascending order and `z` (if given) the matching
/// real eigenvectors as columns.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, norm: f64) -> Result<()> {
    let n = d.len();
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::NoConvergence { dim: n, norm });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk1 = z[k * n + i + 1];
                            let zk = z[k * n + i];
                            z[k * n + i + 1] = s * zk + c * zk1;
                            z[k * n + i] = c * zk - s * zk1;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            if let Some(z) = z.as_deref_mut() {
                for r in 0..n {
                    z.swap(r * n + i, r * n + k);
                }
            }
        }
    }
    Ok(())
}

fn norm_estimate(h: &HermitianOperator) -> f64 {
    h.matrix().frobenius_norm()
}

/// Eigenvalues in ascending order.
pub fn eigvalsh(h: &HermitianOperator) -> Result<Vec<f64>> {
    let n = h.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![h.entry(0, 0).re]);
    }
    if n == 2 {
        return Ok(eig2(h).to_vec());
    }
    let mut t = tridiagonalize(h, false);
    tql2(&mut t.d, &mut t.e, None, norm_estimate(h))?;
    Ok(t.d)
}

/// Full eigen-decomposition with ascending eigenvalues.
pub fn eigh(h: &HermitianOperator) -> Result<Spectrum> {
    let n = h.dim();
    let mut t = tridiagonalize(h, true);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut t.d, &mut t.e, Some(&mut z), norm_estimate(h))?;
    let qd = t.basis.expect("basis requested");
    let mut v = Matrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                let zk = z[k * n + c];
                if zk != 0.0 {
                    acc += qd[(r, k)] * zk;
                }
            }
            v[(r, c)] = acc;
        }
    }
    fix_phases(&mut v);
    Ok(Spectrum { values: t.d, vectors: v })
}

/// Closed-form 2×2 eigenvalues (ascending), used on the hot path of qubit
/// hockey-stick evaluations.
fn eig2(h: &HermitianOperator) -> [f64; 2] {
    let a = h.entry(0, 0).re;
    let d = h.entry(1, 1).re;
    let b = h.entry(0, 1).norm();
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let r = half.hypot(b);
    [mean - r, mean + r]
}

/// Rotates every column so its largest-magnitude component is real positive.
fn fix_phases(v: &mut Matrix) {
    let n = v.rows();
    for c in 0..v.cols() {
        let mut best = 0;
        let mut best_abs = -1.0;
        for r in 0..n {
            let a = v[(r, c)].norm();
            if a > best_abs * (1.0 + 1e-12) {
                best = r;
                best_abs = a;
            }
        }
        if best_abs <= 0.0 {
            continue;
        }
        let ph = v[(best, c)].conj() / best_abs;
        for r in 0..n {
            v[(r, c)] *= ph;
        }
        v[(best, c)] = C64::new(v[(best, c)].re, 0.0);
    }
}
