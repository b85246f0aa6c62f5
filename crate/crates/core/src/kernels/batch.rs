//! Many estimators from one sample in a single sweep over the quadrature
//! nodes. Each function here returns the same numbers as calling the
//! corresponding single estimator repeatedly (up to rounding), but evaluates
//! the oscillatory factor and the Laguerre recurrences once per node.

use num_complex::{Complex, Complex64};

use super::estimators::ln_factorial_ratio;
use super::{HomodyneSample, MAX_PHOTON_INDEX};
use crate::error::{Error, Result};
use crate::specfun::{laguerre_sequence, QuadratureRule};

/// Joint photon-number probabilities `p(n, m)` for `n <= n_max`, `m <= m_max`,
/// row-major with `m` varying fastest.
pub fn joint_photon_grid(
    n_max: usize,
    m_max: usize,
    s: &HomodyneSample,
    rule: &QuadratureRule,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; (n_max + 1) * (m_max + 1)];
    joint_photon_grid_into(n_max, m_max, s, rule, &mut out)?;
    Ok(out)
}

pub(crate) fn joint_photon_grid_into(
    n_max: usize,
    m_max: usize,
    s: &HomodyneSample,
    rule: &QuadratureRule,
    out: &mut [f64],
) -> Result<()> {
    let mut wcos = vec![0.0; rule.order()];
    weighted_cos(s, rule, &mut wcos);
    grid_from_wcos(n_max, m_max, s, rule, &wcos, out)
}

/// Number of leading nodes that matter for an integrand `e^{-t}` times a
/// polynomial of the given degree in `kappa t`: trailing nodes whose
/// `w_i (1 + kappa t_i)^degree` is below `e^{-75}` of the largest such term
/// are dropped.
pub(crate) fn significant_nodes(rule: &QuadratureRule, kappa: f64, degree: usize) -> usize {
    let logs: Vec<f64> = rule
        .nodes()
        .iter()
        .zip(rule.weights())
        .map(|(&t, &w)| w.ln() + degree as f64 * (kappa * t).ln_1p())
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    logs.iter().rposition(|&l| l > max - 75.0).map_or(0, |i| i + 1)
}

/// `out[i] = w_i cos(2 sqrt(kappa t_i) x)` for the first `out.len()` nodes.
pub(crate) fn weighted_cos(s: &HomodyneSample, rule: &QuadratureRule, out: &mut [f64]) {
    let c = 2.0 * s.efficiency().kappa().sqrt() * s.x();
    for ((o, &r), &w) in out.iter_mut().zip(rule.sqrt_nodes()).zip(rule.weights()) {
        *o = w * (c * r).cos();
    }
}

/// Joint grid from precomputed [`weighted_cos`] values; only `wcos.len()`
/// nodes are used.
pub(crate) fn grid_from_wcos(
    n_max: usize,
    m_max: usize,
    s: &HomodyneSample,
    rule: &QuadratureRule,
    wcos: &[f64],
    out: &mut [f64],
) -> Result<()> {
    s.require_modes("joint photon estimator modes", 2)?;
    let cols = m_max + 1;
    debug_assert_eq!(out.len(), (n_max + 1) * cols);
    let kappa = s.efficiency().kappa();
    let u = s.config().amplitudes();
    let (a0, a1) = (kappa * u[0] * u[0], kappa * u[1] * u[1]);
    let mut l0 = vec![0.0; n_max + 1];
    let mut l1 = vec![0.0; cols];
    out.fill(0.0);
    for (&t, &wc) in rule.nodes().iter().zip(wcos) {
        let base = kappa * kappa * wc * t;
        laguerre_sequence(0.0, a0 * t, &mut l0);
        laguerre_sequence(0.0, a1 * t, &mut l1);
        for (row, &ln) in out.chunks_exact_mut(cols).zip(&l0) {
            let f = base * ln;
            for (cell, &lm) in row.iter_mut().zip(&l1) {
                *cell += f * lm;
            }
        }
    }
    Ok(())
}

/// Total photon-number probabilities `p(N)` for `N <= n_max`, any number of modes.
pub fn total_photon_series(n_max: usize, s: &HomodyneSample, rule: &QuadratureRule) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    total_photon_series_into(s, rule, &mut out);
    out
}

pub(crate) fn total_photon_series_into(s: &HomodyneSample, rule: &QuadratureRule, out: &mut [f64]) {
    let mut wcos = vec![0.0; rule.order()];
    weighted_cos(s, rule, &mut wcos);
    total_from_wcos(s, rule, &wcos, out);
}

pub(crate) fn total_from_wcos(s: &HomodyneSample, rule: &QuadratureRule, wcos: &[f64], out: &mut [f64]) {
    let kappa = s.efficiency().kappa();
    let big_m = s.config().num_modes() - 1;
    let coeff = kappa.powi(big_m as i32 + 1) / super::estimators::factorial(big_m);
    let mut lag = vec![0.0; out.len()];
    out.fill(0.0);
    for (&t, &wc) in rule.nodes().iter().zip(wcos) {
        let base = coeff * wc * t.powi(big_m as i32);
        laguerre_sequence(big_m as f64, kappa * t, &mut lag);
        for (o, &l) in out.iter_mut().zip(&lag) {
            *o += base * l;
        }
    }
}

/// Precomputed layout for evaluating a fixed list of two-mode coherences
/// `C_{n,m}` on many samples.
#[derive(Debug, Clone)]
pub(crate) struct CoherencePlan {
    pairs: Vec<(usize, usize)>,
    /// Distinct `|n - m|` with the largest `min(n, m)` needed for each.
    groups: Vec<(usize, usize)>,
    /// Index into `groups` for every pair.
    group_of: Vec<usize>,
    /// Pair indices belonging to each group.
    members: Vec<Vec<usize>>,
    /// `(nu, (-1)^d nu!/mu!, (m - n))` for every pair.
    factors: Vec<(usize, f64, f64)>,
}

impl CoherencePlan {
    pub(crate) fn new(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut groups: Vec<(usize, usize)> = Vec::new();
        let mut group_of = Vec::with_capacity(pairs.len());
        let mut factors = Vec::with_capacity(pairs.len());
        for &(n, m) in pairs {
            let (mu, nu) = (n.max(m), n.min(m));
            if mu > MAX_PHOTON_INDEX {
                return Err(Error::FactorialOverflow(mu));
            }
            let d = mu - nu;
            let g = match groups.iter().position(|&(gd, _)| gd == d) {
                Some(g) => {
                    groups[g].1 = groups[g].1.max(nu);
                    g
                }
                None => {
                    groups.push((d, nu));
                    groups.len() - 1
                }
            };
            group_of.push(g);
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            factors.push((nu, sign * (-ln_factorial_ratio(nu, mu)).exp(), m as f64 - n as f64));
        }
        let mut members = vec![Vec::new(); groups.len()];
        for (k, &g) in group_of.iter().enumerate() {
            members[g].push(k);
        }
        Ok(CoherencePlan {
            pairs: pairs.to_vec(),
            groups,
            group_of,
            members,
            factors,
        })
    }

    pub(crate) fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Largest polynomial degree in `t` among the integrands.
    pub(crate) fn degree(&self) -> usize {
        1 + self.pairs.iter().map(|&(n, m)| n + m).max().unwrap_or(0)
    }

    /// `scratch` must hold `len()` entries; `wcos` as from [`weighted_cos`].
    pub(crate) fn evaluate_from_wcos(
        &self,
        s: &HomodyneSample,
        rule: &QuadratureRule,
        wcos: &[f64],
        scratch: &mut [f64],
        out: &mut [Complex64],
    ) -> Result<()> {
        s.require_modes("coherence estimator modes", 2)?;
        let kappa = s.efficiency().kappa();
        let u = s.config().amplitudes();
        let psi_sum = s.config().psis()[0] + s.config().psis()[1];
        let (a0, a1) = (kappa * u[0] * u[0], kappa * u[1] * u[1]);
        let width = self.groups.iter().map(|&(_, nu)| nu + 1).max().unwrap_or(0);
        let mut l0 = vec![0.0; width];
        let mut l1 = vec![0.0; width];
        scratch.fill(0.0);
        for (&t, &wc) in rule.nodes().iter().zip(wcos) {
            let base = wc * t;
            for (g, &(d, nu_max)) in self.groups.iter().enumerate() {
                let alpha = d as f64;
                laguerre_sequence(alpha, a0 * t, &mut l0[..=nu_max]);
                laguerre_sequence(alpha, a1 * t, &mut l1[..=nu_max]);
                let f = base * t.powi(d as i32);
                for &k in &self.members[g] {
                    let nu = self.factors[k].0;
                    scratch[k] += f * l0[nu] * l1[nu];
                }
            }
        }
        let uu = kappa * u[0] * u[1];
        for (k, o) in out.iter_mut().enumerate() {
            let (_, ratio, dn) = self.factors[k];
            let d = self.groups[self.group_of[k]].0;
            let v = kappa * kappa * uu.powi(d as i32) * ratio * scratch[k];
            let phase = dn * psi_sum;
            *o = Complex::new(v * phase.cos(), v * phase.sin());
        }
        Ok(())
    }
}

/// Coherences `C_{n,m} = <m,m| rho |n,n>` for every listed pair, from one two-mode sample.
pub fn coherence_batch(
    pairs: &[(usize, usize)],
    s: &HomodyneSample,
    rule: &QuadratureRule,
) -> Result<Vec<Complex64>> {
    let plan = CoherencePlan::new(pairs)?;
    let mut wcos = vec![0.0; rule.order()];
    weighted_cos(s, rule, &mut wcos);
    let mut scratch = vec![0.0; plan.len()];
    let mut out = vec![Complex64::new(0.0, 0.0); plan.len()];
    plan.evaluate_from_wcos(s, rule, &wcos, &mut scratch, &mut out)?;
    Ok(out)
}

/// Per-event factors of the three-beam overlap estimator.
///
/// With `O = |1_o 0_e>^{x3}` and `E = |0_o 1_e>^{x3}`, holds the products over
/// the beams of the single-beam estimators of `|1,0><1,0|`, `|0,1><0,1|` and
/// `|1,0><0,1|`, so that the overlap for any `phi` is a cheap combination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzTerms {
    pub oo: f64,
    pub ee: f64,
    pub oe: Complex64,
}

impl GhzTerms {
    pub fn new(samples: &[HomodyneSample], rule: &QuadratureRule) -> Result<Self> {
        GhzTerms::with_nodes(samples, rule, rule.order())
    }

    /// Uses only the first `nodes` quadrature nodes.
    pub(crate) fn with_nodes(samples: &[HomodyneSample], rule: &QuadratureRule, nodes: usize) -> Result<Self> {
        if samples.len() != 3 {
            return Err(Error::Arity {
                what: "beams per event",
                expected: 3,
                got: samples.len(),
            });
        }
        let mut terms = GhzTerms {
            oo: 1.0,
            ee: 1.0,
            oe: Complex64::new(1.0, 0.0),
        };
        for s in samples {
            s.require_modes("modes per beam", 2)?;
            let kappa = s.efficiency().kappa();
            let c = 2.0 * kappa.sqrt() * s.x();
            // s1 = sum w t cos, s2 = sum w t^2 cos
            let (mut s1, mut s2) = (0.0, 0.0);
            let used = rule.nodes().iter().zip(rule.sqrt_nodes()).zip(rule.weights()).take(nodes);
            for ((&t, &r), &w) in used {
                let f = w * t * (c * r).cos();
                s1 += f;
                s2 += f * t;
            }
            let u = s.config().amplitudes();
            let psi = s.config().psis();
            let k2 = kappa * kappa;
            terms.oo *= k2 * (s1 - kappa * u[0] * u[0] * s2);
            terms.ee *= k2 * (s1 - kappa * u[1] * u[1] * s2);
            terms.oe *= Complex64::from_polar(-k2 * kappa * u[0] * u[1] * s2, psi[1] - psi[0]);
        }
        Ok(terms)
    }

    /// Estimator of the overlap with `(O + e^{i phi} E)/sqrt 2`.
    pub fn overlap(&self, phi: f64) -> f64 {
        0.5 * (self.oo + self.ee) + (Complex64::cis(-phi) * self.oe).re
    }
}
