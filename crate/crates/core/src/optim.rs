//! Multi-start compass search, the derivative-free maximizer behind the
//! contraction and diamond-norm estimates.

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Matrix, C64};
use crate::states::{seeded_rng, DensityMatrix};
use crate::{Error, Result};

/// Settings for [`maximize`]. Restart `r` draws its start from stream `r` of
/// the ChaCha generator seeded with `seed`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { restarts: 32, max_iters: 500, step_tol: 1e-10, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptimizerConfig { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::Domain("optimizer needs at least one restart and one iteration".into()));
        }
        if !(self.step_tol > 0.0) {
            return Err(Error::Domain("step tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Optimum {
    pub value: f64,
    pub point: Vec<f64>,
    pub evaluations: usize,
}

/// RNG for restart `restart` of a run seeded with `seed`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Compass search from `start`: try `±step` along every coordinate, accept
/// improvements immediately, halve the step after a sweep without one.
pub fn compass_ascent(
    objective: &mut impl FnMut(&[f64]) -> Result<f64>,
    start: Vec<f64>,
    initial_step: f64,
    max_iters: usize,
    step_tol: f64,
) -> Result<Optimum> {
    let mut x = start;
    let mut best = objective(&x)?;
    let mut evaluations = 1;
    let mut step = initial_step;
    for _ in 0..max_iters {
        if step < step_tol {
            break;
        }
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[i];
                x[i] = old + dir * step;
                let v = objective(&x)?;
                evaluations += 1;
                if v > best {
                    best = v;
                    improved = true;
                    break;
                }
                x[i] = old;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(Optimum { value: best, point: x, evaluations })
}

/// Best compass-search result over `cfg.restarts` Gaussian starting points in
/// `R^dim`. Ties keep the earliest restart.
pub fn maximize(mut objective: impl FnMut(&[f64]) -> Result<f64>, dim: usize, cfg: &OptimizerConfig) -> Result<Optimum> {
    cfg.validate()?;
    let mut best: Option<Optimum> = None;
    let mut evaluations = 0;
    for r in 0..cfg.restarts {
        let mut rng = restart_rng(cfg.seed, r);
        let start: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let run = compass_ascent(&mut objective, start, 0.5, cfg.max_iters, cfg.step_tol)?;
        evaluations += run.evaluations;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let mut best = best.expect("at least one restart");
    best.evaluations = evaluations;
    Ok(best)
}

/// Unit vector in `C^d` from `2d` reals, `None` if the input is (nearly) zero.
pub fn unit_vector(x: &[f64]) -> Option<Vec<C64>> {
    let v: Vec<C64> = x.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 1e-12) {
        return None;
    }
    Some(v.into_iter().map(|z| z / norm).collect())
}

/// Orthonormal pair `(ψ, φ)` in `C^d` from `4d` reals by Gram–Schmidt.
pub fn orthonormal_pair(x: &[f64], d: usize) -> Option<(Vec<C64>, Vec<C64>)> {
    let psi = unit_vector(&x[..2 * d])?;
    let raw: Vec<C64> = x[2 * d..4 * d].chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
    let dot: C64 = psi.iter().zip(&raw).map(|(a, b)| a.conj() * b).sum();
    let rest: Vec<f64> = raw.iter().zip(&psi).flat_map(|(b, a)| {
        let z = b - a * dot;
        [z.re, z.im]
    }).collect();
    let phi = unit_vector(&rest)?;
    Some((psi, phi))
}

/// `|ψ⟩⟨ψ|` for a unit vector.
pub fn projector(psi: &[C64]) -> DensityMatrix {
    DensityMatrix::pure(psi).expect("unit vector")
}

/// Hermitian `d × d` matrix from `d²` reals: diagonal first, then real and
/// imaginary parts of the strict upper triangle.
pub fn hermitian_from_params(x: &[f64], d: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = C64::new(x[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let z = C64::new(x[k], x[k + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}
