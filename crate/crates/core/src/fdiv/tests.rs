use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::*;
use crate::linalg::C64;
use crate::states::{random_density, random_unitary};

const TOL: f64 = 1e-9;

fn diag_pair() -> (DensityMatrix, DensityMatrix) {
    (DensityMatrix::from_real_diagonal(&[0.9, 0.1]).unwrap(), DensityMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap())
}

fn basis(d: usize, k: usize) -> DensityMatrix {
    let mut v = vec![C64::new(0.0, 0.0); d];
    v[k] = C64::new(1.0, 0.0);
    DensityMatrix::pure(&v).unwrap()
}

fn rotated(p: &[f64], u: &crate::Matrix) -> DensityMatrix {
    DensityMatrix::from_real_diagonal(p).unwrap().conjugate(u)
}

fn assert_close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol:e})");
}

#[test]
fn kl_examples() {
    let (rho, sigma) = diag_pair();
    let exact = 0.9 * 1.8f64.ln() + 0.1 * 0.2f64.ln();
    let d = d_f_integral(&ConvexFunction::Kl, &rho, &sigma, TOL).unwrap();
    assert_close(d.value, exact, 1e-9);
    assert!(d.abs_error <= 1e-8);
    assert_eq!(d.support_flag, SupportFlag::Full);
    assert_eq!(d_f_integral(&ConvexFunction::Kl, &rho, &rho, TOL).unwrap().value, 0.0);
    assert_close(umegaki(&rho, &sigma).unwrap(), exact, 1e-14);
    assert_eq!(umegaki(&rho, &rho).unwrap(), 0.0);
}

#[test]
fn orthogonal_states() {
    let (a, b) = (basis(2, 0), basis(2, 1));
    let h = d_f_integral(&ConvexFunction::hellinger(0.5).unwrap(), &a, &b, TOL).unwrap();
    assert_close(h.value, 2.0, 1e-12);
    assert_eq!(h.support_flag, SupportFlag::Disjoint);
    let kl = d_f_integral(&ConvexFunction::Kl, &a, &b, TOL).unwrap();
    assert!(kl.value.is_infinite());
    assert!(umegaki(&a, &b).unwrap().is_infinite());
    assert!(chi2_closed(&a, &b).unwrap().is_infinite());
    let js = d_f_integral(&ConvexFunction::Js, &a, &b, TOL).unwrap();
    assert_close(js.value, core::f64::consts::LN_2, 1e-12);
}

#[test]
fn closed_form_examples() {
    let (rho, sigma) = diag_pair();
    assert_close(chi2_closed(&rho, &sigma).unwrap(), 0.64, 1e-14);
    assert!(chi2_closed(&rho, &rho).unwrap() < 1e-14);
    let p = [0.9, 0.1];
    let q = [0.5, 0.5];
    assert_close(classical_f_div(&p, &q, &ConvexFunction::Kl).unwrap(), 0.368064, 1e-6);
    assert_close(classical_f_div(&p, &q, &ConvexFunction::Chi2).unwrap(), 0.64, 1e-14);
    assert!(classical_f_div(&p, &p, &ConvexFunction::Js).unwrap().abs() < 1e-15);
    assert!(classical_f_div(&[1.0, 0.0], &[0.0, 1.0], &ConvexFunction::Kl).unwrap().is_infinite());
}

#[test]
fn alternative_evaluators_agree() {
    let (rho, sigma) = diag_pair();
    for f in [ConvexFunction::Kl, ConvexFunction::Chi2, ConvexFunction::hellinger(0.5).unwrap(), ConvexFunction::Js] {
        let a = d_f_integral(&f, &rho, &sigma, TOL).unwrap();
        let b = d_f_single_integral(&f, &rho, &sigma, TOL).unwrap();
        let c = d_f_degroot(&f, &rho, &sigma, TOL).unwrap();
        assert_close(a.value, b.value, 2.0 * (a.abs_error + b.abs_error) + 1e-13);
        assert_close(a.value, c.value, 2.0 * (a.abs_error + c.abs_error) + 1e-12);
    }
    let lin = ConvexFunction::linear(1.3).unwrap();
    assert_eq!(d_f_single_integral(&lin, &rho, &sigma, TOL).unwrap().value, 0.0);
    for seed in 0..20 {
        let rho = random_density(2, 2, seed).unwrap();
        let sigma = random_density(2, 2, 100 + seed).unwrap();
        let a = d_f_integral(&ConvexFunction::Chi2, &rho, &sigma, TOL).unwrap();
        let s = d_f_single_integral(&ConvexFunction::Chi2, &rho, &sigma, TOL).unwrap();
        let d = d_f_degroot(&ConvexFunction::Chi2, &rho, &sigma, TOL).unwrap();
        let exact = chi2_closed(&rho, &sigma).unwrap();
        let tol = 1e-8 * (1.0 + exact);
        assert_close(a.value, exact, tol);
        assert_close(s.value, exact, tol);
        assert_close(d.value, exact, tol);
    }
}

#[test]
fn random_pairs_match_closed_forms() {
    for seed in 0..40 {
        let d = 2 + seed as usize % 3;
        let rho = random_density(d, d, 7 * seed).unwrap();
        let sigma = random_density(d, d, 7 * seed + 3).unwrap();
        let kl = d_f_integral(&ConvexFunction::Kl, &rho, &sigma, TOL).unwrap();
        let u = umegaki(&rho, &sigma).unwrap();
        assert!((kl.value - u).abs() <= 1e-7f64.max(10.0 * kl.abs_error), "seed {seed}: {kl:?} vs {u}");
    }
}

#[test]
fn commuting_pairs_with_zeros_match_classical() {
    let u = random_unitary(3, 9);
    let cases: [([f64; 3], [f64; 3]); 4] = [
        ([0.5, 0.5, 0.0], [0.0, 0.5, 0.5]),
        ([0.5, 0.5, 0.0], [0.2, 0.3, 0.5]),
        ([0.2, 0.3, 0.5], [0.6, 0.4, 0.0]),
        ([1.0, 0.0, 0.0], [0.0, 0.7, 0.3]),
    ];
    let fs = [
        ConvexFunction::hellinger(0.5).unwrap(),
        ConvexFunction::Js,
        ConvexFunction::lecam(0.3).unwrap(),
        ConvexFunction::Kl,
        ConvexFunction::Chi2,
        ConvexFunction::skew(ConvexFunction::Kl, 0.5, 0.5).unwrap(),
    ];
    for (p, q) in cases.iter() {
        let (rho, sigma) = (rotated(p, &u), rotated(q, &u));
        for f in &fs {
            let want = classical_f_div(p, q, f).unwrap();
            let got = d_f_integral(f, &rho, &sigma, TOL).unwrap();
            if want.is_infinite() {
                assert!(got.value.is_infinite(), "{f} {p:?} {q:?}: {got:?}");
            } else {
                assert_close(got.value, want, 1e-7);
            }
            let single = d_f_single_integral(f, &rho, &sigma, TOL).unwrap();
            let dg = d_f_degroot(f, &rho, &sigma, TOL).unwrap();
            if want.is_finite() {
                assert_close(single.value, want, 1e-7);
                assert_close(dg.value, want, 1e-7);
            } else {
                assert!(single.value.is_infinite() && dg.value.is_infinite());
            }
        }
    }
}

#[test]
fn exchange_symmetry() {
    for seed in 0..10 {
        let rho = random_density(3, 3, seed).unwrap();
        let sigma = random_density(3, 2, 50 + seed).unwrap();
        for f in [ConvexFunction::hellinger(0.3).unwrap(), ConvexFunction::Js, ConvexFunction::Kl] {
            let a = d_f_integral(&f, &rho, &sigma, TOL).unwrap();
            let b = d_f_integral(&ConvexFunction::star(f.clone()), &sigma, &rho, TOL).unwrap();
            if a.value.is_finite() {
                assert_close(a.value, b.value, 10.0 * (a.abs_error + b.abs_error) + 1e-12);
            } else {
                assert!(b.value.is_infinite());
            }
        }
    }
}

#[test]
fn skew_and_lecam_identities() {
    let rho = random_density(2, 2, 1).unwrap();
    let sigma = random_density(2, 2, 2).unwrap();
    let js = d_f_integral(&ConvexFunction::Js, &rho, &sigma, TOL).unwrap();
    let sk = skew_divergence(&ConvexFunction::Kl, 0.5, 0.5, &rho, &sigma, TOL).unwrap();
    assert_close(js.value, sk.value, 10.0 * (js.abs_error + sk.abs_error) + 1e-12);
    let plain = d_f_integral(&ConvexFunction::Kl, &rho, &sigma, TOL).unwrap();
    let s00 = skew_divergence(&ConvexFunction::Kl, 0.0, 0.0, &rho, &sigma, TOL).unwrap();
    assert_close(plain.value, s00.value, 1e-12);
    for (lambda, mu) in [(0.3, 0.7), (0.5, 0.0), (1.0, 0.3), (0.7, 1.0)] {
        let f = ConvexFunction::skew(ConvexFunction::hellinger(0.5).unwrap(), lambda, mu).unwrap();
        let lhs = d_f_integral(&f, &rho, &sigma, TOL).unwrap();
        let rhs = skew_divergence(&ConvexFunction::hellinger(0.5).unwrap(), lambda, mu, &rho, &sigma, TOL).unwrap();
        assert_close(lhs.value, rhs.value, 10.0 * (lhs.abs_error + rhs.abs_error) + 1e-12);
    }
    let lambda = 0.3;
    let m = rho.mix(lambda, &sigma).unwrap();
    let lc = d_f_integral(&ConvexFunction::lecam(lambda).unwrap(), &rho, &sigma, TOL).unwrap();
    let rhs = lambda * chi2_closed(&rho, &m).unwrap() + (1.0 - lambda) * chi2_closed(&sigma, &m).unwrap();
    assert_close(lc.value, rhs, 10.0 * lc.abs_error + 1e-12);
}

#[test]
fn local_limit_recovers_chi2() {
    let rho = random_density(3, 3, 11).unwrap();
    let sigma = random_density(3, 3, 12).unwrap();
    let chi = chi2_closed(&rho, &sigma).unwrap();
    let kl = local_chi2_limit(&ConvexFunction::Kl, &rho, &sigma, &DEFAULT_LAMBDAS, 1e-11).unwrap();
    assert!((kl - chi).abs() <= 1e-4 * chi, "{kl} vs {chi}");
    let c2 = local_chi2_limit(&ConvexFunction::Chi2, &rho, &sigma, &DEFAULT_LAMBDAS, 1e-11).unwrap();
    assert!((c2 - 2.0 * chi).abs() <= 1e-4 * chi);
    assert!(local_chi2_limit(&ConvexFunction::Kl, &rho, &rho, &DEFAULT_LAMBDAS, 1e-10).unwrap().abs() < 1e-20);
    assert!(matches!(
        local_chi2_limit(&ConvexFunction::linear(1.0).unwrap(), &rho, &sigma, &DEFAULT_LAMBDAS, 1e-10),
        Err(Error::Domain(_))
    ));
    let pure = basis(3, 0);
    assert!(matches!(local_chi2_limit(&ConvexFunction::Kl, &pure, &sigma, &DEFAULT_LAMBDAS, 1e-10), Err(Error::Support(_))));
}

#[test]
fn upper_bound_examples() {
    let h = ConvexFunction::hellinger(0.5).unwrap();
    assert_close(d_f_upper_bound(&h, &basis(2, 0), &basis(2, 1)).unwrap(), 2.0, 1e-15);
    let (rho, sigma) = diag_pair();
    assert!(d_f_upper_bound(&ConvexFunction::Kl, &rho, &rho).unwrap().abs() < 1e-15);
    let b = d_f_upper_bound(&ConvexFunction::Kl, &rho, &sigma).unwrap();
    // D_max(ρ‖σ) = ln 1.8 and D_max(σ‖ρ) = ln 5; for x ln x, f − x f' = −x
    assert_close(b, -0.2 + 1.8f64.ln() + 1.0, 1e-12);
    assert!(b >= 0.368064);
}

#[test]
fn generalized_scaling() {
    let (rho, sigma) = diag_pair();
    let base = d_f_integral(&ConvexFunction::Kl, &rho, &sigma, TOL).unwrap().value;
    let d = d_f_generalized(&ConvexFunction::Kl, &rho.op().scale(2.0), sigma.op(), TOL).unwrap();
    assert_close(d.value, 2.0 * base + 2.0 * 2f64.ln(), 1e-8);
    assert_close(d.value, 2.12242, 1e-5);
    let same = d_f_generalized(&ConvexFunction::Kl, rho.op(), sigma.op(), TOL).unwrap();
    assert_close(same.value, base, 1e-9);
    let alpha = 2.0;
    let (a, b) = (2.0, 3.0);
    let hf = ConvexFunction::hellinger(alpha).unwrap();
    let h = d_f_integral(&hf, &rho, &sigma, TOL).unwrap().value;
    let lhs = d_f_generalized(&hf, &rho.op().scale(a), &sigma.op().scale(b), TOL).unwrap().value;
    let k = a.powf(alpha) * b.powf(1.0 - alpha);
    assert_close(lhs, (k - a) / (alpha - 1.0) + k * h, 1e-8);
    assert!(matches!(
        d_f_generalized(&ConvexFunction::Kl, rho.op(), &HermitianOperator::zeros(2), TOL),
        Err(Error::Domain(_))
    ));
}

#[test]
fn tolerance_and_dimension_checks() {
    let (rho, _) = diag_pair();
    let other = DensityMatrix::maximally_mixed(3);
    assert!(matches!(d_f_integral(&ConvexFunction::Kl, &rho, &other, TOL), Err(Error::DimensionMismatch { .. })));
    assert!(matches!(d_f_integral(&ConvexFunction::Kl, &rho, &rho, 0.5), Err(Error::Domain(_))));
}

#[test]
fn deterministic_bits() {
    let rho = random_density(3, 3, 5).unwrap();
    let sigma = random_density(3, 3, 6).unwrap();
    let f = ConvexFunction::hellinger(0.7).unwrap();
    let a: Vec<u64> = (0..2).map(|_| d_f_integral(&f, &rho, &sigma, 1e-10).unwrap().value.to_bits()).collect();
    assert_eq!(a[0], a[1]);
}
