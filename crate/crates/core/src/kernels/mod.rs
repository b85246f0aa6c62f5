//! Unbiased estimators for single-local-oscillator multimode homodyne data.
//!
//! Every estimator maps one homodyne outcome (quadrature value `x` measured
//! with a known LO setting and efficiency) to a number whose average over
//! the data equals the expectation of the target observable.
//!
//! Estimators built from the oscillatory integral are returned in the form
//! symmetrized under `(x, psi) -> (-x, psi + pi)`. Shifting every phase by
//! `pi` flips the measured quadrature, so the data distribution is invariant
//! under this map and the symmetrized estimator has the same mean. It is what
//! makes diagonal estimators real and off-diagonal ones Hermitian pointwise.

pub(crate) mod batch;
mod estimators;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use batch::{coherence_batch, joint_photon_grid, total_photon_series, GhzTerms};
pub use estimators::{
    coherence_estimator, diagonal_estimator, ghz_projector_estimator, joint_photon_estimator,
    matrix_element_estimator, mean_photon_estimator, mgf_estimator, q_function_estimator,
    second_moment_estimator, total_photon_estimator, MAX_PHOTON_INDEX,
};

pub(crate) type ModeVec<T> = SmallVec<[T; 4]>;

/// Detector quantum efficiency with the derived kernel scale `kappa` and the
/// variance of the Gaussian smearing it causes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Efficiency {
    eta: f64,
    kappa: f64,
    smear_variance: f64,
}

impl Efficiency {
    /// Accepts `0.5 < eta <= 1`.
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta > 0.5 && eta <= 1.0) {
            return Err(Error::EfficiencyOutOfRange(eta));
        }
        Ok(Efficiency {
            eta,
            kappa: 2.0 * eta / (2.0 * eta - 1.0),
            smear_variance: (1.0 - eta) / (4.0 * eta),
        })
    }

    pub fn ideal() -> Self {
        Efficiency {
            eta: 1.0,
            kappa: 2.0,
            smear_variance: 0.0,
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `2 eta / (2 eta - 1)`
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `(1 - eta) / (4 eta)`
    pub fn smear_variance(&self) -> f64 {
        self.smear_variance
    }
}

impl TryFrom<f64> for Efficiency {
    type Error = Error;
    fn try_from(eta: f64) -> Result<Self> {
        Efficiency::new(eta)
    }
}

impl From<Efficiency> for f64 {
    fn from(e: Efficiency) -> f64 {
        e.eta
    }
}

/// Local-oscillator setting over `M + 1` modes.
///
/// The LO selects the mode `A = sum_l e^{-i psi_l} u_l a_l` with hyperspherical
/// amplitudes `u_0 = cos th_1`, `u_l = sin th_1 ... sin th_l cos th_{l+1}`,
/// `u_M = sin th_1 ... sin th_M`; the measured quadrature is `(A + A^dag)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LOConfig {
    thetas: ModeVec<f64>,
    psis: ModeVec<f64>,
    amplitudes: ModeVec<f64>,
}

impl LOConfig {
    /// `thetas` has `M` entries in `[0, pi/2]`, `psis` has `M + 1`. Phases are
    /// reduced into `[0, 2 pi)`.
    pub fn new(thetas: &[f64], psis: &[f64]) -> Result<Self> {
        if psis.len() != thetas.len() + 1 {
            return Err(Error::Arity {
                what: "LO phases",
                expected: thetas.len() + 1,
                got: psis.len(),
            });
        }
        for &th in thetas {
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&th) {
                return Err(Error::ThetaRange(th));
            }
        }
        if psis.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("LO phase"));
        }
        let mut amplitudes = ModeVec::with_capacity(psis.len());
        let mut sin_prod = 1.0;
        for &th in thetas {
            amplitudes.push(sin_prod * th.cos());
            sin_prod *= th.sin();
        }
        amplitudes.push(sin_prod);
        Ok(LOConfig {
            thetas: thetas.iter().copied().collect(),
            psis: psis
                .iter()
                .map(|p| p.rem_euclid(std::f64::consts::TAU))
                .collect(),
            amplitudes,
        })
    }

    pub fn two_mode(theta: f64, psi0: f64, psi1: f64) -> Result<Self> {
        LOConfig::new(&[theta], &[psi0, psi1])
    }

    /// Two-mode setting from `cos 2 theta`, the variable that is sampled
    /// uniformly.
    pub fn from_cos2theta(cos2theta: f64, psi0: f64, psi1: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&cos2theta) {
            return Err(Error::Format(format!("cos 2 theta = {cos2theta} outside [-1, 1]")));
        }
        LOConfig::two_mode(0.5 * cos2theta.acos(), psi0, psi1)
    }

    pub fn num_modes(&self) -> usize {
        self.psis.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn psis(&self) -> &[f64] {
        &self.psis
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }
}

/// One homodyne outcome with the setting it was taken at.
#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneSample {
    x: f64,
    config: LOConfig,
    efficiency: Efficiency,
}

impl HomodyneSample {
    pub fn new(x: f64, config: LOConfig, efficiency: Efficiency) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::NonFinite("homodyne outcome"));
        }
        Ok(HomodyneSample {
            x,
            config,
            efficiency,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn config(&self) -> &LOConfig {
        &self.config
    }

    pub fn efficiency(&self) -> &Efficiency {
        &self.efficiency
    }

    pub(crate) fn require_modes(&self, what: &'static str, modes: usize) -> Result<()> {
        if self.config.num_modes() != modes {
            return Err(Error::Arity {
                what,
                expected: modes,
                got: self.config.num_modes(),
            });
        }
        Ok(())
    }
}

/// The operator `|{m_l}><{n_l}|`; its estimator averages to `<{n_l}| rho |{m_l}>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockProjector {
    n: ModeVec<usize>,
    m: ModeVec<usize>,
}

impl FockProjector {
    pub fn new(n: &[usize], m: &[usize]) -> Result<Self> {
        if n.len() != m.len() {
            return Err(Error::Arity {
                what: "Fock projector indices",
                expected: n.len(),
                got: m.len(),
            });
        }
        Ok(FockProjector {
            n: n.iter().copied().collect(),
            m: m.iter().copied().collect(),
        })
    }

    /// Projector onto `|{n_l}>`.
    pub fn diagonal(n: &[usize]) -> Self {
        FockProjector {
            n: n.iter().copied().collect(),
            m: n.iter().copied().collect(),
        }
    }

    pub fn n(&self) -> &[usize] {
        &self.n
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// The projector with the two index sets exchanged (the adjoint operator).
    pub fn adjoint(&self) -> Self {
        FockProjector {
            n: self.m.clone(),
            m: self.n.clone(),
        }
    }
}
