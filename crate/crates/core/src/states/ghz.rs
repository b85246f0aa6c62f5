//! Three-beam, three-photon GHZ state `(|1_o 1_o 1_o> - |1_e 1_e 1_e>)/sqrt 2`,
//! each beam measured with its own LO over its `(o, e)` polarization pair.
//!
//! Per beam the LO picks out `A = e^{-i psi_o} cos th a_o + e^{-i psi_e} sin th a_e`.
//! Writing each photon in terms of `A` and the orthogonal mode `B` splits the
//! state into eight branches labelled by the set `S` of beams whose photon sits
//! in `B`. Tracing out the `B` modes leaves a diagonal mixture over `S`, and the
//! outcome density is `sum_S |c_S|^2 prod_j f_{n_j}(x_j)` with `n_j = 1` for
//! `j` outside `S` and 0 inside, where `f_n` is the (smeared) Fock-state
//! quadrature density.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::TwoModeRecord;
use crate::error::{Error, Result};
use crate::kernels::Efficiency;

/// LO setting of one beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSetting {
    pub theta: f64,
    pub psi_o: f64,
    pub psi_e: f64,
}

impl BeamSetting {
    pub fn new(theta: f64, psi_o: f64, psi_e: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::ThetaRange(theta));
        }
        if !(psi_o.is_finite() && psi_e.is_finite()) {
            return Err(Error::NonFinite("LO phase"));
        }
        Ok(BeamSetting { theta, psi_o, psi_e })
    }

    /// Setting from `cos 2 theta`, the variable that is sampled uniformly.
    pub fn from_cos2theta(cos2theta: f64, psi_o: f64, psi_e: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&cos2theta) {
            return Err(Error::Format(format!("cos 2 theta = {cos2theta} outside [-1, 1]")));
        }
        BeamSetting::new(0.5 * cos2theta.acos(), psi_o, psi_e)
    }
}

/// The three LO settings and the common detector efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzExperiment {
    pub beams: [BeamSetting; 3],
    pub efficiency: Efficiency,
}

impl GhzExperiment {
    pub fn new(beams: [BeamSetting; 3], efficiency: Efficiency) -> Self {
        GhzExperiment { beams, efficiency }
    }

    /// `|c_S|^2` for the eight branches; bit `j` of the index is set when
    /// beam `j`'s photon is in the unmeasured mode.
    pub fn branch_weights(&self) -> [f64; 8] {
        branch_weights(&self.beams)
    }

    /// Joint density of the three outcomes.
    pub fn density(&self, x: [f64; 3]) -> f64 {
        let b = self.efficiency.smear_variance();
        let f: [[f64; 2]; 3] = std::array::from_fn(|j| [fock_density(0, x[j], b), fock_density(1, x[j], b)]);
        self.branch_weights()
            .iter()
            .enumerate()
            .map(|(set, w)| {
                w * (0..3)
                    .map(|j| f[j][usize::from(set & (1 << j) == 0)])
                    .product::<f64>()
            })
            .sum()
    }

    /// Draws three outcomes at these settings.
    pub fn draw_outcomes<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 3] {
        let weights = self.branch_weights();
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut set = 7;
        for (k, w) in weights.iter().enumerate() {
            acc += w;
            if u < acc {
                set = k;
                break;
            }
        }
        let noise = self.efficiency.smear_variance().sqrt();
        std::array::from_fn(|j| {
            let ideal = if set & (1 << j) == 0 {
                one_photon_quadrature(rng)
            } else {
                let z: f64 = StandardNormal.sample(rng);
                0.5 * z
            };
            let z: f64 = StandardNormal.sample(rng);
            ideal + noise * z
        })
    }
}

fn branch_weights(beams: &[BeamSetting; 3]) -> [f64; 8] {
    // amplitudes of |o> and |e> on |1_A 0_B> and |0_A 1_B>
    let amps: [[Complex64; 4]; 3] = std::array::from_fn(|j| {
        let BeamSetting { theta, psi_o, psi_e } = beams[j];
        let (s, c) = theta.sin_cos();
        let po = Complex64::cis(-psi_o);
        let pe = Complex64::cis(-psi_e);
        [po * c, -po * s, pe * s, pe * c]
    });
    std::array::from_fn(|set| {
        let mut o = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let mut e = Complex64::new(FRAC_1_SQRT_2, 0.0);
        for (j, a) in amps.iter().enumerate() {
            let in_b = set & (1 << j) != 0;
            o *= if in_b { a[1] } else { a[0] };
            e *= if in_b { a[3] } else { a[2] };
        }
        (o - e).norm_sqr()
    })
}

/// Quadrature density of `|n>` (n = 0 or 1) convolved with a centred Gaussian
/// of variance `b`. Vacuum variance is 1/4.
pub fn fock_density(n: usize, x: f64, b: f64) -> f64 {
    let v = 0.25 + b;
    let g = (-x * x / (2.0 * v)).exp() / (TAU * v).sqrt();
    match n {
        0 => g,
        1 => g * (b / v + x * x * 0.25 / (v * v)),
        _ => panic!("fock_density supports n <= 1"),
    }
}

/// Ideal single-photon quadrature: density `4 x^2 sqrt(2/pi) e^{-2 x^2}`,
/// i.e. `+-1/2` times a chi variable with three degrees of freedom.
fn one_photon_quadrature<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let r2: f64 = (0..3)
        .map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            z * z
        })
        .sum();
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    sign * 0.5 * r2.sqrt()
}

/// Expected overlap with `(|O> + e^{i phi}|E>)/sqrt 2`: `(1 - cos phi)/2`.
pub fn ghz_overlap_theory(phi: f64) -> f64 {
    0.5 * (1.0 - phi.cos())
}

/// Independent uniform settings for each beam, then the three outcomes.
pub(crate) fn draw_event<R: Rng + ?Sized>(eff: &Efficiency, rng: &mut R) -> [TwoModeRecord; 3] {
    let raw: [(f64, f64, f64); 3] = std::array::from_fn(|_| {
        (
            rng.random_range(-1.0..=1.0),
            rng.random_range(0.0..TAU),
            rng.random_range(0.0..TAU),
        )
    });
    let beams = raw.map(|(c2, po, pe)| BeamSetting {
        theta: 0.5 * f64::acos(c2),
        psi_o: po,
        psi_e: pe,
    });
    let x = GhzExperiment::new(beams, *eff).draw_outcomes(rng);
    std::array::from_fn(|j| TwoModeRecord {
        x: x[j],
        cos2theta: raw[j].0,
        psi0: raw[j].1,
        psi1: raw[j].2,
    })
}
