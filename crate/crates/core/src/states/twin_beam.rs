use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::TwoModeRecord;
use crate::error::{Error, Result};
use crate::kernels::Efficiency;

/// Two-mode squeezed vacuum `sqrt(1 - |xi|^2) sum_n xi^n |n, n>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwinBeamState {
    xi: Complex64,
}

impl TwinBeamState {
    pub fn new(xi: Complex64) -> Result<Self> {
        if !(xi.re.is_finite() && xi.im.is_finite()) {
            return Err(Error::NonFinite("squeezing parameter"));
        }
        if xi.norm() >= 1.0 {
            return Err(Error::SqueezingRange(xi.norm()));
        }
        Ok(TwinBeamState { xi })
    }

    /// State with mean photon number `nbar` per beam and `arg xi = phase`.
    pub fn from_nbar(nbar: f64, phase: f64) -> Result<Self> {
        if !(nbar.is_finite() && nbar >= 0.0) {
            return Err(Error::MeanPhotonRange(nbar));
        }
        if !phase.is_finite() {
            return Err(Error::NonFinite("squeezing phase"));
        }
        let r = (nbar / (1.0 + nbar)).sqrt();
        TwinBeamState::new(Complex64::from_polar(r, phase))
    }

    pub fn xi(&self) -> Complex64 {
        self.xi
    }

    /// Mean photon number per beam, `|xi|^2 / (1 - |xi|^2)`.
    pub fn nbar(&self) -> f64 {
        let q = self.xi.norm_sqr();
        q / (1.0 - q)
    }

    /// `p(n, m) = delta_{nm} (1 - |xi|^2) |xi|^{2n}`
    pub fn joint_probability(&self, n: usize, m: usize) -> f64 {
        if n != m {
            return 0.0;
        }
        let q = self.xi.norm_sqr();
        (1.0 - q) * q.powi(n as i32)
    }

    /// Probability of `N` photons in total: `(1 - |xi|^2) |xi|^N` for even `N`, else 0.
    pub fn total_probability(&self, total: usize) -> f64 {
        if total % 2 == 1 {
            return 0.0;
        }
        self.joint_probability(total / 2, total / 2)
    }

    /// `C_{n,m} = <m,m| rho |n,n> = (1 - |xi|^2) xi^m conj(xi)^n`
    pub fn coherence(&self, n: usize, m: usize) -> Complex64 {
        (1.0 - self.xi.norm_sqr()) * self.xi.powu(m as u32) * self.xi.conj().powu(n as u32)
    }

    /// `<N> = 2 nbar`
    pub fn mean_total(&self) -> f64 {
        2.0 * self.nbar()
    }

    /// `<N^2> = 8 nbar^2 + 4 nbar`
    pub fn second_moment_total(&self) -> f64 {
        let nbar = self.nbar();
        8.0 * nbar * nbar + 4.0 * nbar
    }

    /// `<z^N> = (1 - |xi|^2) / (1 - z^2 |xi|^2)`
    pub fn generating_function(&self, z: f64) -> f64 {
        let q = self.xi.norm_sqr();
        (1.0 - q) / (1.0 - z * z * q)
    }

    /// Unnormalized coherent-state overlap
    /// `<alpha, beta| rho |alpha, beta> = (1 - |xi|^2) e^{-|alpha|^2 - |beta|^2} |e^{xi alpha^* beta^*}|^2`.
    pub fn q_function(&self, alpha: Complex64, beta: Complex64) -> f64 {
        let e = self.xi * alpha.conj() * beta.conj();
        (1.0 - self.xi.norm_sqr()) * (-alpha.norm_sqr() - beta.norm_sqr() + 2.0 * e.re).exp()
    }

    /// Variance of the quadrature measured at the given LO setting, including
    /// the detector smearing:
    /// `[1 + |xi|^2 + 2|xi| sin 2th cos(psi_0 + psi_1 - arg xi)] / [4 (1 - |xi|^2)] + (1 - eta)/(4 eta)`.
    pub fn variance(&self, theta: f64, psi0: f64, psi1: f64, eff: &Efficiency) -> f64 {
        self.variance_sin2(
            (2.0 * theta).sin(),
            (psi0 + psi1 - self.xi.arg()).rem_euclid(TAU),
            eff,
        )
    }

    fn variance_sin2(&self, sin2theta: f64, phase: f64, eff: &Efficiency) -> f64 {
        let r = self.xi.norm();
        (1.0 + r * r + 2.0 * r * sin2theta * phase.cos()) / (4.0 * (1.0 - r * r))
            + eff.smear_variance()
    }

    /// One outcome: `cos 2 theta` uniform on `[-1, 1]`, both phases uniform on
    /// `[0, 2 pi)`, then a centred Gaussian with [`TwinBeamState::variance`].
    pub fn draw<R: Rng + ?Sized>(&self, eff: &Efficiency, rng: &mut R) -> TwoModeRecord {
        let cos2theta: f64 = rng.random_range(-1.0..=1.0);
        let psi0 = rng.random_range(0.0..TAU);
        let psi1 = rng.random_range(0.0..TAU);
        let z: f64 = StandardNormal.sample(rng);
        let sin2theta = (1.0 - cos2theta * cos2theta).max(0.0).sqrt();
        let var = self.variance_sin2(sin2theta, (psi0 + psi1 - self.xi.arg()).rem_euclid(TAU), eff);
        TwoModeRecord {
            x: var.sqrt() * z,
            cos2theta,
            psi0,
            psi1,
        }
    }
}

/// Free-function form of [`TwinBeamState::variance`].
pub fn twin_beam_variance(
    state: &TwinBeamState,
    theta: f64,
    psi0: f64,
    psi1: f64,
    eff: &Efficiency,
) -> f64 {
    state.variance(theta, psi0, psi1, eff)
}
