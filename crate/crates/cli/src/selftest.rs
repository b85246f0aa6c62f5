//! Built-in checks: quadrature-based kernels against an adaptive reference,
//! closed-form kernels against their integral forms, the Laguerre summation
//! identity, and sampler variances against the analytic model.

use std::f64::consts::{FRAC_PI_2, TAU};

use homodyne_core::engine::Accumulator;
use homodyne_core::kernels::{
    joint_photon_estimator, mgf_estimator, q_function_estimator, total_photon_estimator, Efficiency,
    HomodyneSample, LOConfig,
};
use homodyne_core::rng::substream;
use homodyne_core::specfun::reference::oscillatory_reference;
use homodyne_core::specfun::{gauss_laguerre, laguerre};
use homodyne_core::states::{sample_twin_beam, SampleData, TwinBeamState};
use num_complex::Complex64;
use rand::Rng;

use crate::config::RunConfig;
use crate::CliError;

const KERNEL_TOL: f64 = 1e-6;
const DRAWS: usize = 20;
const SAMPLER_COUNT: usize = 200_000;
const SAMPLER_SIGMA: f64 = 4.0;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn random_sample<R: Rng>(rng: &mut R) -> Result<HomodyneSample, CliError> {
    let eff = Efficiency::new(rng.random_range(0.75..=1.0))?;
    let lo = LOConfig::two_mode(
        rng.random_range(0.0..FRAC_PI_2),
        rng.random_range(0.0..TAU),
        rng.random_range(0.0..TAU),
    )?;
    Ok(HomodyneSample::new(rng.random_range(-3.0..3.0), lo, eff)?)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

fn kernel_quadrature(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rule = gauss_laguerre(cfg.quad_order)?;
    let mut rng = substream(cfg.seed, 0);
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let s = random_sample(&mut rng)?;
        let kappa = s.efficiency().kappa();
        let u = s.config().amplitudes().to_vec();
        let (n, m) = (rng.random_range(0..=3usize), rng.random_range(0..=3usize));
        let joint = |t: f64| {
            laguerre(n, 0.0, kappa * u[0] * u[0] * t).unwrap() * laguerre(m, 0.0, kappa * u[1] * u[1] * t).unwrap()
        };
        let reference = kappa * kappa * oscillatory_reference(joint, 2, kappa, s.x()).re;
        worst = worst.max(rel(joint_photon_estimator(n, m, &s, &rule)?, reference));

        let total = rng.random_range(0..=6usize);
        let g = |t: f64| laguerre(total, 1.0, kappa * t).unwrap();
        let reference = kappa * kappa * oscillatory_reference(g, 2, kappa, s.x()).re;
        worst = worst.max(rel(total_photon_estimator(total, &s, &rule)?, reference));
    }
    Ok(Outcome {
        name: "joint and total photon kernels vs adaptive reference",
        pass: worst < KERNEL_TOL,
        detail: format!("{}-point rule, worst relative error {worst:.1e}", cfg.quad_order),
    })
}

fn closed_forms(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut rng = substream(cfg.seed, 1);
    let mut worst = 0.0f64;
    for _ in 0..DRAWS {
        let s = random_sample(&mut rng)?;
        let kappa = s.efficiency().kappa();
        let (u, psi) = (s.config().amplitudes(), s.config().psis());
        let alpha = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let beta = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let shift = u[0] * (alpha.conj() * Complex64::cis(psi[0])).re
            + u[1] * (beta.conj() * Complex64::cis(psi[1])).re;
        let reference = kappa * kappa * oscillatory_reference(|_| 1.0, 2, kappa, s.x() - shift).re;
        worst = worst.max(rel(q_function_estimator(alpha, beta, &s)?, reference));

        let z = rng.random_range(0.0..0.9);
        let damping = kappa * z / (1.0 - z);
        let reference = kappa * kappa / (1.0 - z).powi(2)
            * oscillatory_reference(|t| (-damping * t).exp(), 2, kappa, s.x()).re;
        worst = worst.max(rel(mgf_estimator(z, &s)?, reference));
    }
    Ok(Outcome {
        name: "Q-function and generating-function closed forms vs integrals",
        pass: worst < KERNEL_TOL,
        detail: format!("worst relative error {worst:.1e}"),
    })
}

/// Sum over compositions `n_0 + ... + n_M = n` of `prod L_{n_l}^{a_l}(x_l)`.
fn composition_sum(n: usize, alphas: &[f64], xs: &[f64]) -> Result<f64, CliError> {
    if alphas.len() == 1 {
        return Ok(laguerre(n, alphas[0], xs[0])?);
    }
    let mut sum = 0.0;
    for i in 0..=n {
        sum += laguerre(i, alphas[0], xs[0])? * composition_sum(n - i, &alphas[1..], &xs[1..])?;
    }
    Ok(sum)
}

fn laguerre_identity(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut rng = substream(cfg.seed, 2);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let m = rng.random_range(0..=3usize);
        let n = rng.random_range(0..=6usize);
        let alphas: Vec<f64> = (0..=m).map(|_| rng.random_range(0..=2usize) as f64).collect();
        let xs: Vec<f64> = (0..=m).map(|_| rng.random_range(0.0..5.0)).collect();
        let lhs = composition_sum(n, &alphas, &xs)?;
        let rhs = laguerre(n, alphas.iter().sum::<f64>() + m as f64, xs.iter().sum())?;
        worst = worst.max(rel(lhs, rhs));
    }
    Ok(Outcome {
        name: "Laguerre summation identity",
        pass: worst < 1e-9,
        detail: format!("200 cases, worst relative error {worst:.1e}"),
    })
}

/// `x^2 - Var(x | setting)` has zero mean whatever the state.
fn sampler_variance(name: &'static str, state: TwinBeamState, eff: Efficiency, seed: u64) -> Result<Outcome, CliError> {
    let set = sample_twin_beam(&state, eff, SAMPLER_COUNT, seed)?;
    let SampleData::TwinBeam(records) = set.data() else {
        unreachable!("twin-beam sampler returns two-mode records")
    };
    let mut acc = Accumulator::new();
    for r in records {
        let theta = 0.5 * r.cos2theta.acos();
        acc.push(r.x * r.x - state.variance(theta, r.psi0, r.psi1, &eff))?;
    }
    let z = acc.estimate().map_or(f64::NAN, |e| e.z_score(0.0));
    Ok(Outcome {
        name,
        pass: z.abs() < SAMPLER_SIGMA,
        detail: format!("eta = {}, {SAMPLER_COUNT} samples, z = {z:.2}", eff.eta()),
    })
}

pub fn run(cfg: &RunConfig, eta_given: bool) -> Result<(), CliError> {
    let eff = if eta_given { cfg.eta } else { Efficiency::new(0.9)? };
    let vacuum = TwinBeamState::new(Complex64::new(0.0, 0.0))?;
    let twin = TwinBeamState::from_nbar(2.0, 0.7)?;
    let outcomes = [
        kernel_quadrature(cfg)?,
        closed_forms(cfg)?,
        laguerre_identity(cfg)?,
        sampler_variance("vacuum quadrature variance", vacuum, eff, cfg.seed)?,
        sampler_variance("twin-beam quadrature variance", twin, eff, cfg.seed.wrapping_add(1))?,
    ];
    for o in &outcomes {
        println!("{} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Check(format!("{failed} self-test check(s) failed")))
    }
}
