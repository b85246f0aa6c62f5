use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels::batch::{
    grid_from_wcos, significant_nodes, total_from_wcos, weighted_cos, CoherencePlan,
};
use crate::kernels::{
    mean_photon_estimator, mgf_estimator, q_function_estimator, second_moment_estimator,
    HomodyneSample, MAX_PHOTON_INDEX,
};
use crate::specfun::QuadratureRule;

/// An observable family to reconstruct.
///
/// Text form, as accepted by [`str::parse`]: `joint:8` or `joint:8x4`,
/// `total:10`, `coherence:8` (all `C_{n,m}` with `n + m <= 8`),
/// `q:<Re a>:<Im a>:<Re b>:<Im b>`, `mgf:<z>`, `mean`, `second`, `ghz:<points>`.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// Two-mode `p(n, m)` for `n <= n_max`, `m <= m_max`.
    Joint { n_max: usize, m_max: usize },
    /// Total photon number distribution `p(N)`, `N <= n_max`.
    Total { n_max: usize },
    /// `C_{n,m} = <m,m| rho |n,n>` for `n + m <= max_sum`; real and imaginary
    /// parts are reported separately.
    Coherence { max_sum: usize },
    /// Coherent-state overlap `<alpha, beta| rho |alpha, beta>`.
    QFunction { alpha: Complex64, beta: Complex64 },
    /// `<z^N>` of the total photon number.
    Mgf { z: f64 },
    /// `<N>`
    MeanPhoton,
    /// `<N^2>`
    SecondMoment,
    /// GHZ overlap `C(phi)` at `phi = 2 pi k / points`, `k < points`.
    GhzOverlap { points: usize },
}

impl Observable {
    pub fn ghz_phases(points: usize) -> Vec<f64> {
        (0..points).map(|k| TAU * k as f64 / points as f64).collect()
    }

    /// Pairs `(n, m)` covered by `Coherence { max_sum }`, ordered by `n` then `m`.
    pub fn coherence_pairs(max_sum: usize) -> Vec<(usize, usize)> {
        (0..=max_sum)
            .flat_map(|n| (0..=max_sum - n).map(move |m| (n, m)))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Observable::Joint { n_max, m_max } if n_max.max(m_max) > MAX_PHOTON_INDEX => {
                Err(Error::FactorialOverflow(n_max.max(m_max)))
            }
            Observable::Total { n_max } if n_max > MAX_PHOTON_INDEX => {
                Err(Error::FactorialOverflow(n_max))
            }
            Observable::Coherence { max_sum } if max_sum > MAX_PHOTON_INDEX => {
                Err(Error::FactorialOverflow(max_sum))
            }
            Observable::QFunction { alpha, beta }
                if ![alpha.re, alpha.im, beta.re, beta.im].iter().all(|v| v.is_finite()) =>
            {
                Err(Error::NonFinite("coherent amplitude"))
            }
            Observable::Mgf { z } if !(0.0..=1.0).contains(&z) => Err(Error::MgfDomain(z)),
            Observable::GhzOverlap { points: 0 } => {
                Err(Error::Format("GHZ phase grid needs at least one point".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observable::Joint { n_max, m_max } if n_max == m_max => write!(f, "joint:{n_max}"),
            Observable::Joint { n_max, m_max } => write!(f, "joint:{n_max}x{m_max}"),
            Observable::Total { n_max } => write!(f, "total:{n_max}"),
            Observable::Coherence { max_sum } => write!(f, "coherence:{max_sum}"),
            Observable::QFunction { alpha, beta } => {
                write!(f, "q:{}:{}:{}:{}", alpha.re, alpha.im, beta.re, beta.im)
            }
            Observable::Mgf { z } => write!(f, "mgf:{z}"),
            Observable::MeanPhoton => write!(f, "mean"),
            Observable::SecondMoment => write!(f, "second"),
            Observable::GhzOverlap { points } => write!(f, "ghz:{points}"),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Format(format!("cannot parse observable {text:?}"));
        let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        let real = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        let mut parts = text.trim().split(':');
        let head = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let obs = match (head, args.as_slice()) {
            ("joint", [size]) => match size.split_once('x') {
                Some((n, m)) => Observable::Joint {
                    n_max: int(n)?,
                    m_max: int(m)?,
                },
                None => {
                    let n = int(size)?;
                    Observable::Joint { n_max: n, m_max: n }
                }
            },
            ("total", [n]) => Observable::Total { n_max: int(n)? },
            ("coherence", [s]) => Observable::Coherence { max_sum: int(s)? },
            ("q", [ar, ai, br, bi]) => Observable::QFunction {
                alpha: Complex64::new(real(ar)?, real(ai)?),
                beta: Complex64::new(real(br)?, real(bi)?),
            },
            ("mgf", [z]) => Observable::Mgf { z: real(z)? },
            ("mean", []) => Observable::MeanPhoton,
            ("second", []) => Observable::SecondMoment,
            ("ghz", [p]) => Observable::GhzOverlap { points: int(p)? },
            _ => return Err(bad()),
        };
        obs.validate()?;
        Ok(obs)
    }
}

pub(crate) type Label = (&'static str, String, String);

/// Quadrature-based jobs carry the number of leading nodes they need.
pub(crate) enum TwinJob {
    Grid { n_max: usize, m_max: usize, offset: usize, nodes: usize },
    Total { n_max: usize, offset: usize, nodes: usize },
    /// Rows `offset + 2k` (real) and `offset + 2k + 1` (imaginary).
    Coherence { plan: CoherencePlan, offset: usize, nodes: usize },
    Q { alpha: Complex64, beta: Complex64, offset: usize },
    Mgf { z: f64, offset: usize },
    Mean { offset: usize },
    Second { offset: usize },
}

/// Per-partition work buffers for [`TwinJob::evaluate`].
pub(crate) struct TwinScratch {
    real: Vec<f64>,
    complex: Vec<Complex64>,
    /// `w_i cos(2 sqrt(kappa t_i) x)`, shared by all jobs of one sample.
    wcos: Vec<f64>,
}

impl TwinScratch {
    pub(crate) fn new(jobs: &[TwinJob]) -> Self {
        let len = jobs
            .iter()
            .map(|j| match j {
                TwinJob::Coherence { plan, .. } => plan.len(),
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        let nodes = jobs
            .iter()
            .map(|j| match *j {
                TwinJob::Grid { nodes, .. }
                | TwinJob::Total { nodes, .. }
                | TwinJob::Coherence { nodes, .. } => nodes,
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        TwinScratch {
            real: vec![0.0; len],
            complex: vec![Complex64::new(0.0, 0.0); len],
            wcos: vec![0.0; nodes],
        }
    }

    /// Fills the shared cosine table for a new sample.
    pub(crate) fn prepare(&mut self, s: &HomodyneSample, rule: &QuadratureRule) {
        weighted_cos(s, rule, &mut self.wcos);
    }
}

impl TwinJob {
    pub(crate) fn evaluate(
        &self,
        s: &HomodyneSample,
        rule: &QuadratureRule,
        scratch: &mut TwinScratch,
        values: &mut [f64],
    ) -> Result<()> {
        match self {
            &TwinJob::Grid { n_max, m_max, offset, nodes } => {
                let len = (n_max + 1) * (m_max + 1);
                let out = &mut values[offset..offset + len];
                grid_from_wcos(n_max, m_max, s, rule, &scratch.wcos[..nodes], out)?;
            }
            &TwinJob::Total { n_max, offset, nodes } => {
                let out = &mut values[offset..=offset + n_max];
                total_from_wcos(s, rule, &scratch.wcos[..nodes], out);
            }
            TwinJob::Coherence { plan, offset, nodes } => {
                let len = plan.len();
                let out = &mut scratch.complex[..len];
                let wcos = &scratch.wcos[..*nodes];
                plan.evaluate_from_wcos(s, rule, wcos, &mut scratch.real[..len], out)?;
                for (k, c) in out.iter().enumerate() {
                    values[offset + 2 * k] = c.re;
                    values[offset + 2 * k + 1] = c.im;
                }
            }
            &TwinJob::Q { alpha, beta, offset } => {
                values[offset] = q_function_estimator(alpha, beta, s)?;
            }
            &TwinJob::Mgf { z, offset } => values[offset] = mgf_estimator(z, s)?,
            &TwinJob::Mean { offset } => values[offset] = mean_photon_estimator(s)?,
            &TwinJob::Second { offset } => values[offset] = second_moment_estimator(s)?,
        }
        Ok(())
    }
}

pub(crate) struct GhzJob {
    pub(crate) phis: Vec<f64>,
    pub(crate) offset: usize,
}

/// Nodes needed by the per-beam GHZ sums (polynomials of degree 2).
pub(crate) fn ghz_nodes(rule: &QuadratureRule, kappa: f64) -> usize {
    significant_nodes(rule, kappa, 2)
}

fn label(name: &'static str, p1: impl ToString, p2: impl ToString) -> Label {
    (name, p1.to_string(), p2.to_string())
}

pub(crate) fn compile_twin(
    observables: &[Observable],
    rule: &QuadratureRule,
    kappa: f64,
) -> Result<(Vec<Label>, Vec<TwinJob>)> {
    let mut labels = Vec::new();
    let mut jobs = Vec::new();
    for obs in observables {
        obs.validate()?;
        let offset = labels.len();
        match *obs {
            Observable::Joint { n_max, m_max } => {
                for n in 0..=n_max {
                    for m in 0..=m_max {
                        labels.push(label("joint", n, m));
                    }
                }
                let nodes = significant_nodes(rule, kappa, 1 + n_max + m_max);
                jobs.push(TwinJob::Grid { n_max, m_max, offset, nodes });
            }
            Observable::Total { n_max } => {
                for n in 0..=n_max {
                    labels.push(label("total", n, ""));
                }
                let nodes = significant_nodes(rule, kappa, 1 + n_max);
                jobs.push(TwinJob::Total { n_max, offset, nodes });
            }
            Observable::Coherence { max_sum } => {
                let pairs = Observable::coherence_pairs(max_sum);
                for &(n, m) in &pairs {
                    labels.push(label("coherence_re", n, m));
                    labels.push(label("coherence_im", n, m));
                }
                let plan = CoherencePlan::new(&pairs)?;
                let nodes = significant_nodes(rule, kappa, plan.degree());
                jobs.push(TwinJob::Coherence { plan, offset, nodes });
            }
            Observable::QFunction { alpha, beta } => {
                labels.push(label("q", alpha, beta));
                jobs.push(TwinJob::Q { alpha, beta, offset });
            }
            Observable::Mgf { z } => {
                labels.push(label("mgf", z, ""));
                jobs.push(TwinJob::Mgf { z, offset });
            }
            Observable::MeanPhoton => {
                labels.push(label("mean_photon", "", ""));
                jobs.push(TwinJob::Mean { offset });
            }
            Observable::SecondMoment => {
                labels.push(label("second_moment", "", ""));
                jobs.push(TwinJob::Second { offset });
            }
            Observable::GhzOverlap { .. } => {
                return Err(Error::Incompatible {
                    observable: obs.to_string(),
                    dataset: "twin-beam",
                })
            }
        }
    }
    Ok((labels, jobs))
}

pub(crate) fn compile_ghz(observables: &[Observable]) -> Result<(Vec<Label>, Vec<GhzJob>)> {
    let mut labels = Vec::new();
    let mut jobs = Vec::new();
    for obs in observables {
        obs.validate()?;
        match *obs {
            Observable::GhzOverlap { points } => {
                let phis = Observable::ghz_phases(points);
                let offset = labels.len();
                for &phi in &phis {
                    labels.push(label("ghz_overlap", phi, ""));
                }
                jobs.push(GhzJob { phis, offset });
            }
            _ => {
                return Err(Error::Incompatible {
                    observable: obs.to_string(),
                    dataset: "GHZ",
                })
            }
        }
    }
    Ok((labels, jobs))
}
