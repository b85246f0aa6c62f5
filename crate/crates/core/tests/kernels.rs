mod common;

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI, TAU};

use homodyne_core::kernels::{
    coherence_estimator, diagonal_estimator, ghz_projector_estimator, joint_photon_estimator,
    matrix_element_estimator, mean_photon_estimator, mgf_estimator, q_function_estimator,
    second_moment_estimator, total_photon_estimator, Efficiency, FockProjector, GhzTerms,
    HomodyneSample, LOConfig,
};
use homodyne_core::specfun::{gauss_laguerre, kummer_phi, QuadratureRule};
use homodyne_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn kappa(eta: f64) -> f64 {
    Efficiency::new(eta).unwrap().kappa()
}

fn rule() -> QuadratureRule {
    gauss_laguerre(150).unwrap()
}

fn sample(x: f64, theta: f64, psi0: f64, psi1: f64, eta: f64) -> HomodyneSample {
    HomodyneSample::new(
        x,
        LOConfig::two_mode(theta, psi0, psi1).unwrap(),
        Efficiency::new(eta).unwrap(),
    )
    .unwrap()
}

fn check_against_oracle(n: [usize; 2], m: [usize; 2], x: f64, theta: f64, psi: [f64; 2], eta: f64) {
    let s = sample(x, theta, psi[0], psi[1], eta);
    let got = matrix_element_estimator(&FockProjector::new(&n, &m).unwrap(), &s, &rule()).unwrap();
    let want = common::matrix_element_oracle(&n, &m, &common::amps(theta), &psi, kappa(eta), x);
    assert!(
        (got - want).norm() <= 1e-6 * want.norm().max(1.0),
        "n={n:?} m={m:?}: {got} vs {want}"
    );
}

#[test]
fn worked_examples_match_oracle() {
    check_against_oracle([1, 0], [0, 1], 0.5, FRAC_PI_4, [0.3, 1.1], 0.9);
    check_against_oracle([1, 1], [1, 1], 1.2, FRAC_PI_3, [0.0, 0.0], 0.85);
    check_against_oracle([2, 1], [2, 1], -0.7, 1.0, [2.0, 4.5], 0.9);
}

#[test]
fn assorted_elements_match_oracle() {
    let cases: [([usize; 2], [usize; 2]); 6] = [
        ([0, 0], [1, 1]),
        ([2, 2], [0, 0]),
        ([3, 0], [0, 1]),
        ([0, 2], [1, 0]),
        ([4, 1], [2, 3]),
        ([1, 3], [0, 0]),
    ];
    for (k, (n, m)) in cases.into_iter().enumerate() {
        let x = -1.3 + 0.55 * k as f64;
        let theta = 0.2 + 0.2 * k as f64;
        check_against_oracle(n, m, x, theta, [0.4 * k as f64, 1.0 - 0.3 * k as f64], 0.8 + 0.03 * k as f64);
    }
}

#[test]
fn diagonal_and_joint_agree() {
    let s = sample(-0.7, 1.0, 2.0, 4.5, 0.9);
    let r = rule();
    let a = joint_photon_estimator(2, 1, &s, &r).unwrap();
    let b = diagonal_estimator(&[2, 1], &s, &r).unwrap();
    let c = matrix_element_estimator(&FockProjector::diagonal(&[2, 1]), &s, &r).unwrap();
    assert!((a - b).abs() < 1e-14 && (a - c.re).abs() < 1e-12 && c.im == 0.0);
}

#[test]
fn coherence_is_the_swapped_projector() {
    let s = sample(0.4, 0.9, 0.7, 2.2, 0.9);
    let r = rule();
    let c = coherence_estimator(1, 3, &s, &r).unwrap();
    let p = matrix_element_estimator(&FockProjector::new(&[3, 3], &[1, 1]).unwrap(), &s, &r).unwrap();
    assert_eq!(c, p);
    let o = common::matrix_element_oracle(&[3, 3], &[1, 1], &common::amps(0.9), &[0.7, 2.2], kappa(0.9), 0.4);
    assert!((c - o).norm() < 1e-6);
}

#[test]
fn vacuum_projector_closed_form() {
    let r = rule();
    for &(x, eta) in &[(0.0, 1.0), (0.3, 0.9), (-1.7, 0.75), (4.0, 0.6)] {
        let s = sample(x, 0.6, 1.0, 2.0, eta);
        let kappa = kappa(eta);
        let closed = kappa * kappa * kummer_phi(-kappa * x * x).unwrap();
        let total = total_photon_estimator(0, &s, &r).unwrap();
        let q = q_function_estimator(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), &s).unwrap();
        assert!((total - closed).abs() < 1e-10 * closed.abs().max(1.0));
        assert!((q - closed).abs() < 1e-14 * closed.abs().max(1.0));
    }
}

#[test]
fn q_function_at_bracket_zero() {
    // alpha = e^{i psi0} a, beta = e^{i psi1} b with x = a cos th + b sin th
    let (theta, psi0, psi1): (f64, f64, f64) = (0.8, 1.3, -0.4);
    let (a, b) = (0.6, -0.25);
    let x = a * theta.cos() + b * theta.sin();
    let s = sample(x, theta, psi0, psi1, 0.9);
    let q = q_function_estimator(Complex64::from_polar(a, psi0), Complex64::from_polar(b, psi1), &s).unwrap();
    let kappa = kappa(0.9);
    assert!((q - kappa * kappa).abs() < 1e-12);
}

#[test]
fn moments_and_generating_function() {
    let s = sample(0.0, 0.2, 0.0, 0.0, 1.0);
    assert_eq!(mean_photon_estimator(&s).unwrap(), -1.0);
    assert_eq!(second_moment_estimator(&s).unwrap(), 0.5);
    assert_eq!(mgf_estimator(1.0, &s).unwrap(), 1.0);
    assert_eq!(mgf_estimator(1.5, &s), Err(Error::MgfDomain(1.5)));
    assert_eq!(mgf_estimator(-0.1, &s), Err(Error::MgfDomain(-0.1)));
}

#[test]
fn generating_function_matches_series() {
    let r = rule();
    // the series in z has radius 1/(kappa - 1), so stay with eta close to 1
    for &(x, eta) in &[(0.2, 1.0), (-0.9, 1.0), (1.4, 0.95)] {
        let s = sample(x, 0.5, 0.0, 0.0, eta);
        for &z in &[0.0f64, 0.3, 0.7] {
            let series: f64 = (0..=60)
                .map(|n| z.powi(n as i32) * total_photon_estimator(n, &s, &r).unwrap())
                .sum();
            let closed = mgf_estimator(z, &s).unwrap();
            assert!((series - closed).abs() < 1e-4, "x={x} eta={eta} z={z}: {series} vs {closed}");
        }
    }
}

#[test]
fn moments_from_generating_function_derivatives() {
    // <N> = G'(1), <N^2> = G''(1) + G'(1), via one-sided stencils at z = 1
    let h = 0.01;
    let d1_coef = [49.0 / 20.0, -6.0, 15.0 / 2.0, -20.0 / 3.0, 15.0 / 4.0, -6.0 / 5.0, 1.0 / 6.0];
    let d2_coef = [
        469.0 / 90.0, -223.0 / 10.0, 879.0 / 20.0, -949.0 / 18.0, 41.0, -201.0 / 10.0, 1019.0 / 180.0, -7.0 / 10.0,
    ];
    for &(x, eta) in &[(0.3, 1.0), (-1.1, 0.9), (0.8, 0.7)] {
        let s = sample(x, 0.5, 0.0, 0.0, eta);
        let g = |k: usize| mgf_estimator(1.0 - k as f64 * h, &s).unwrap();
        let d1 = d1_coef.iter().enumerate().map(|(k, c)| c * g(k)).sum::<f64>() / h;
        let d2 = d2_coef.iter().enumerate().map(|(k, c)| c * g(k)).sum::<f64>() / (h * h);
        let mean = mean_photon_estimator(&s).unwrap();
        let second = second_moment_estimator(&s).unwrap();
        assert!((d1 - mean).abs() < 1e-6 * mean.abs().max(1.0), "{d1} vs {mean}");
        assert!((d2 + d1 - second).abs() < 1e-6 * second.abs().max(1.0), "{} vs {second}", d2 + d1);
    }
}

#[test]
fn outcomes_far_out_stay_bounded() {
    let r = rule();
    for k in -20..=20 {
        let x = 0.5 * k as f64;
        let s = sample(x, 0.7, 0.3, 2.0, 0.85);
        for n in 0..=6 {
            assert!(total_photon_estimator(n, &s, &r).unwrap().abs() < 1e3);
            for m in 0..=4 {
                assert!(joint_photon_estimator(n, m, &s, &r).unwrap().abs() < 1e4);
                assert!(coherence_estimator(n, m, &s, &r).unwrap().norm() < 1e4);
            }
        }
    }
}

#[test]
fn arity_is_enforced() {
    let r = rule();
    let three = HomodyneSample::new(
        0.1,
        LOConfig::new(&[0.3, 0.5], &[0.0, 1.0, 2.0]).unwrap(),
        Efficiency::ideal(),
    )
    .unwrap();
    assert!(matches!(joint_photon_estimator(0, 0, &three, &r), Err(Error::Arity { .. })));
    assert!(matches!(mean_photon_estimator(&three), Err(Error::Arity { .. })));
    assert!(diagonal_estimator(&[0, 0, 0], &three, &r).is_ok());
    let s = sample(0.1, 0.3, 0.0, 0.0, 1.0);
    assert!(matches!(diagonal_estimator(&[0, 0, 0], &s, &r), Err(Error::Arity { .. })));
    assert!(matches!(ghz_projector_estimator(0.0, &[s.clone(), s], &r), Err(Error::Arity { .. })));
    assert!(Efficiency::new(0.4).is_err());
    assert!(Efficiency::new(1.01).is_err());
}

#[test]
fn three_mode_diagonal_matches_oracle() {
    let r = rule();
    let cfg = LOConfig::new(&[0.6, 0.9], &[0.2, 1.4, 3.0]).unwrap();
    let u = cfg.amplitudes().to_vec();
    let s = HomodyneSample::new(0.45, cfg, Efficiency::new(0.9).unwrap()).unwrap();
    let got = diagonal_estimator(&[1, 0, 2], &s, &r).unwrap();
    let want = common::matrix_element_oracle(&[1, 0, 2], &[1, 0, 2], &u, &[0.2, 1.4, 3.0], kappa(0.9), 0.45);
    assert!((got - want.re).abs() < 1e-6 * want.re.abs().max(1.0), "{got} vs {want}");
}

#[test]
fn ghz_terms_match_single_beam_estimators() {
    let r = rule();
    let beams = [
        sample(0.3, 0.4, 0.1, 2.0, 0.85),
        sample(-0.8, 1.2, 3.3, 0.6, 0.85),
        sample(1.1, 0.7, 5.0, 4.1, 0.85),
    ];
    let terms = GhzTerms::new(&beams, &r).unwrap();
    let (mut oo, mut ee, mut oe) = (1.0, 1.0, Complex64::new(1.0, 0.0));
    for (b, s) in beams.iter().enumerate() {
        let theta = [0.4, 1.2, 0.7][b];
        let psi = [[0.1, 2.0], [3.3, 0.6], [5.0, 4.1]][b];
        let kappa = kappa(0.85);
        let u = common::amps(theta);
        oo *= common::matrix_element_oracle(&[1, 0], &[1, 0], &u, &psi, kappa, s.x()).re;
        ee *= common::matrix_element_oracle(&[0, 1], &[0, 1], &u, &psi, kappa, s.x()).re;
        // <E| rho |O> per beam
        oe *= common::matrix_element_oracle(&[0, 1], &[1, 0], &u, &psi, kappa, s.x());
    }
    assert!((terms.oo - oo).abs() < 1e-6 * oo.abs().max(1.0));
    assert!((terms.ee - ee).abs() < 1e-6 * ee.abs().max(1.0));
    assert!((terms.oe - oe).norm() < 1e-6 * oe.norm().max(1.0));
    for phi in [0.0, 1.0, PI] {
        let direct = ghz_projector_estimator(phi, &beams, &r).unwrap();
        let manual = 0.5 * (oo + ee) + (Complex64::cis(-phi) * oe).re;
        assert!((direct - manual).abs() < 1e-6 * manual.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hermiticity(
        n in proptest::collection::vec(0usize..=5, 2),
        m in proptest::collection::vec(0usize..=5, 2),
        x in -3.0f64..3.0,
        theta in 0.0f64..std::f64::consts::FRAC_PI_2,
        psi0 in 0.0f64..TAU,
        psi1 in 0.0f64..TAU,
        eta in 0.6f64..=1.0,
    ) {
        let r = rule();
        let s = sample(x, theta, psi0, psi1, eta);
        let p = FockProjector::new(&n, &m).unwrap();
        let a = matrix_element_estimator(&p, &s, &r).unwrap();
        let b = matrix_element_estimator(&p.adjoint(), &s, &r).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn diagonal_ignores_phases(
        n in proptest::collection::vec(0usize..=6, 2),
        x in -3.0f64..3.0,
        theta in 0.0f64..std::f64::consts::FRAC_PI_2,
        psi in proptest::collection::vec(0.0f64..TAU, 4),
        eta in 0.6f64..=1.0,
    ) {
        let r = rule();
        let a = diagonal_estimator(&n, &sample(x, theta, psi[0], psi[1], eta), &r).unwrap();
        let b = diagonal_estimator(&n, &sample(x, theta, psi[2], psi[3], eta), &r).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn total_ignores_lo_setting(
        n in 0usize..=10,
        x in -3.0f64..3.0,
        thetas in proptest::collection::vec(0.0f64..std::f64::consts::FRAC_PI_2, 2),
        psi in proptest::collection::vec(0.0f64..TAU, 4),
        eta in 0.6f64..=1.0,
    ) {
        let r = rule();
        let a = total_photon_estimator(n, &sample(x, thetas[0], psi[0], psi[1], eta), &r).unwrap();
        let b = total_photon_estimator(n, &sample(x, thetas[1], psi[2], psi[3], eta), &r).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn estimators_are_finite(
        x in -10.0f64..10.0,
        theta in 0.0f64..std::f64::consts::FRAC_PI_2,
        eta in 0.5f64..=1.0,
        n in 0usize..=8,
        m in 0usize..=8,
    ) {
        let r = rule();
        let s = sample(x, theta, 0.3, 1.9, eta);
        prop_assert!(joint_photon_estimator(n, m, &s, &r).unwrap().is_finite());
        let c = coherence_estimator(n, m, &s, &r).unwrap();
        prop_assert!(c.re.is_finite() && c.im.is_finite());
        prop_assert!(mgf_estimator(0.5, &s).unwrap().is_finite());
    }
}
