mod common;

use common::{diag, pair};
use proptest::prelude::*;
use qfdiv::fdiv::umegaki;
use qfdiv::renyi::{
    classical_renyi, d_alpha, geometric_renyi, kappa_bound, measured_renyi_lower, non_additivity_fixture, nussbaum_szkola, petz_renyi,
    regularization_trace, renyi_bound_chain, sandwiched_renyi, MeasurementStrategy,
};
use qfdiv::states::random_channel;

const REL: f64 = 1e-10;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn minimal_maximal_sandwich(seed in 0u64..1_000_000, half in any::<bool>()) {
        let alpha = if half { 0.5 } else { 2.0 };
        let (rho, sigma) = pair(2, seed);
        let d = d_alpha(&rho, &sigma, alpha, REL).unwrap();
        let tol = 1e-9 + 10.0 * d.abs_error;
        for s in [MeasurementStrategy::NsPair, MeasurementStrategy::RandomProjective { k: 8, seed }] {
            prop_assert!(measured_renyi_lower(&rho, &sigma, alpha, s).unwrap() <= d.value + tol);
        }
        prop_assert!(d.value <= geometric_renyi(&rho, &sigma, alpha).unwrap() + tol);
        let chain = renyi_bound_chain(&rho, &sigma, alpha, if half { 0.25 } else { 0.5 }, REL).unwrap();
        prop_assert!(chain.holds(1e-9), "{chain:?}");
        if half {
            prop_assert!(d.value <= petz_renyi(&rho, &sigma, 0.5).unwrap() + 2.0 * 2f64.ln() + tol);
        }
        prop_assert!(sandwiched_renyi(&rho, &sigma, 2.0).unwrap() <= petz_renyi(&rho, &sigma, 2.0).unwrap() + 1e-9);
    }

    #[test]
    fn data_processing(seed in 0u64..1_000_000, alpha in 0.2f64..3.0) {
        prop_assume!((alpha - 1.0).abs() > 1e-3);
        let (rho, sigma) = pair(2, seed);
        let ch = random_channel(2, 2, 2, seed).unwrap();
        let before = d_alpha(&rho, &sigma, alpha, REL).unwrap();
        let after = d_alpha(&ch.apply(&rho).unwrap(), &ch.apply(&sigma).unwrap(), alpha, REL).unwrap();
        prop_assert!(after.value <= before.value + 1e-9 + 10.0 * (before.abs_error + after.abs_error));
    }

    #[test]
    fn limit_brackets_umegaki(seed in 0u64..1_000_000, d in 2usize..=3) {
        let (rho, sigma) = pair(d, seed);
        let lo = d_alpha(&rho, &sigma, 1.0 - 1e-3, REL).unwrap().value;
        let hi = d_alpha(&rho, &sigma, 1.0 + 1e-3, REL).unwrap().value;
        let u = umegaki(&rho, &sigma).unwrap();
        prop_assert!(lo <= u + 1e-9 && u <= hi + 1e-9);
        prop_assert!((hi - lo) <= 1e-2 * u.max(1e-12));
    }

    #[test]
    fn nussbaum_szkola_reproduces_petz(seed in 0u64..1_000_000, alpha in 0.1f64..2.0) {
        prop_assume!((alpha - 1.0).abs() > 1e-3);
        let (rho, sigma) = pair(3, seed);
        let (p, q) = nussbaum_szkola(&rho, &sigma).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10 && (q.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let classical = classical_renyi(&p, &q, alpha).unwrap();
        prop_assert!((classical - petz_renyi(&rho, &sigma, alpha).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn commuting_pairs_agree_with_classical() {
    let (rho, sigma) = (diag(&[0.9, 0.1]), diag(&[0.5, 0.5]));
    let expect = 1.64f64.ln();
    assert!((d_alpha(&rho, &sigma, 2.0, REL).unwrap().value - expect).abs() < 1e-9);
    for v in [petz_renyi(&rho, &sigma, 2.0), sandwiched_renyi(&rho, &sigma, 2.0), geometric_renyi(&rho, &sigma, 2.0)] {
        assert!((v.unwrap() - expect).abs() < 1e-12);
    }
}

#[test]
fn non_additivity_is_visible() {
    let (rho, sigma) = non_additivity_fixture();
    let one = d_alpha(&rho, &sigma, 2.0, REL).unwrap();
    let two = d_alpha(&rho.tensor(&rho).unwrap(), &sigma.tensor(&sigma).unwrap(), 2.0, REL).unwrap();
    let gap = (two.value - 2.0 * one.value).abs();
    assert!(gap > 10.0 * (two.abs_error + 2.0 * one.abs_error) && gap > 1e-2, "gap {gap}");
}

#[test]
fn regularization_chains() {
    for seed in 0..5 {
        let (rho, sigma) = pair(2, 77 + seed);
        for alpha in [0.5, 2.0] {
            let tr = regularization_trace(&rho, &sigma, alpha, 4, 1e-9).unwrap();
            assert_eq!(tr.n_values(), vec![1, 2, 3, 4]);
            assert!(tr.chains_hold(1e-9), "{tr:?}");
        }
    }
    let (rho, sigma) = (diag(&[0.7, 0.3]), diag(&[0.4, 0.6]));
    let tr = regularization_trace(&rho, &sigma, 2.0, 4, 1e-10).unwrap();
    let v0 = tr.per_n[0].value;
    assert!(tr.per_n.iter().all(|p| (p.value - v0).abs() < 1e-8));
}

#[test]
fn kappa_grid() {
    let (rho, sigma) = pair(2, 5);
    let grid = [0.5, 1.0, 1.5, 2.0];
    for &a in &grid {
        for &b in &grid {
            let k = kappa_bound(&rho, &sigma, a, b, REL).unwrap();
            let h = qfdiv::renyi::h_alpha_or_kl(&rho, &sigma, a, REL).unwrap().value;
            assert!(k.lower <= h + 1e-8 && h <= k.upper + 1e-8, "({a}, {b}): {k:?} vs {h}");
        }
    }
}
