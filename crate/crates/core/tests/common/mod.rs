#![allow(dead_code)]

use qfdiv::states::random_density;
use qfdiv::{ConvexFunction, DensityMatrix, HermitianOperator, Matrix, C64};

/// Full-rank random pair in dimension `d`.
pub fn pair(d: usize, seed: u64) -> (DensityMatrix, DensityMatrix) {
    (random_density(d, d, 2 * seed).unwrap(), random_density(d, d, 2 * seed + 1).unwrap())
}

/// Probability vector with entries bounded away from zero.
pub fn simplex(raw: &[f64]) -> Vec<f64> {
    let w: Vec<f64> = raw.iter().map(|x| 0.05 + x.abs()).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

pub fn diag(p: &[f64]) -> DensityMatrix {
    DensityMatrix::from_real_diagonal(p).unwrap()
}

/// Hermitian matrix from `d²` unconstrained reals.
pub fn hermitian(x: &[f64], d: usize) -> HermitianOperator {
    let mut m = Matrix::zeros(d, d);
    let mut k = d;
    for i in 0..d {
        m[(i, i)] = C64::new(x[i], 0.0);
        for j in i + 1..d {
            m[(i, j)] = C64::new(x[k], x[k + 1]);
            m[(j, i)] = C64::new(x[k], -x[k + 1]);
            k += 2;
        }
    }
    HermitianOperator::new(m).unwrap()
}

/// Generators with finite divergences on full-rank pairs.
pub fn registry() -> Vec<ConvexFunction> {
    vec![
        ConvexFunction::kl(),
        ConvexFunction::chi2(),
        ConvexFunction::js(),
        ConvexFunction::hellinger(0.5).unwrap(),
        ConvexFunction::hellinger(1.5).unwrap(),
        ConvexFunction::hellinger(3.0).unwrap(),
        ConvexFunction::lecam(0.3).unwrap(),
        ConvexFunction::linear(2.0).unwrap(),
        ConvexFunction::skew(ConvexFunction::kl(), 0.3, 0.6).unwrap(),
        ConvexFunction::depol_pullback(ConvexFunction::kl(), 0.4).unwrap(),
        ConvexFunction::star(ConvexFunction::kl()),
        ConvexFunction::combination(vec![(0.5, ConvexFunction::kl()), (2.0, ConvexFunction::chi2())]).unwrap(),
    ]
}

/// Direct classical sum `Σ q f(p/q)` for full-support `q`.
pub fn classical_oracle(f: &ConvexFunction, p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(&a, &b)| b * f.eval(a / b)).sum()
}
