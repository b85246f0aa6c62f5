use std::path::{Path, PathBuf};

use homodyne_core::engine::{Observable, PartitionPlan};
use homodyne_core::kernels::Efficiency;
use homodyne_core::specfun::{DEFAULT_ORDER, MAX_ORDER};
use homodyne_core::states::TwinBeamState;
use num_complex::Complex64;
use serde::Deserialize;

use crate::{io_error, CliError};

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_PARTITIONS: usize = 64;

/// TOML run configuration. Every key is optional; command-line flags win.
///
/// ```toml
/// state = "twin-beam"
/// nbar = 2.0
/// xi_phase_rad = 0.0
/// eta = 0.9
/// samples = 1000000
/// seed = "42"
/// quad_order = 150
/// observables = ["joint:8", "mean"]
/// out = "run"
/// ```
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub state: Option<String>,
    pub nbar: Option<f64>,
    pub xi_re: Option<f64>,
    pub xi_im: Option<f64>,
    pub xi_phase_rad: Option<f64>,
    pub eta: Option<f64>,
    pub samples: Option<u64>,
    #[serde(default, deserialize_with = "seed_value")]
    pub seed: Option<u64>,
    pub quad_order: Option<usize>,
    pub partitions: Option<usize>,
    pub threads: Option<usize>,
    pub observables: Option<Vec<String>>,
    pub out: Option<PathBuf>,
}

/// Seeds may be written as TOML integers or, for values above `i64::MAX`, as
/// decimal strings.
fn seed_value<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Seed {
        Int(u64),
        Text(String),
    }
    match Seed::deserialize(d)? {
        Seed::Int(v) => Ok(Some(v)),
        Seed::Text(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| serde::de::Error::custom(format!("seed {s:?} is not an unsigned 64-bit integer"))),
    }
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(ConfigFile::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path.display(), e))?;
        toml::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }

    pub fn apply_state_flags(
        &mut self,
        state: Option<String>,
        nbar: Option<f64>,
        xi: Option<&str>,
        xi_phase: Option<f64>,
    ) -> Result<(), CliError> {
        if let Some(s) = state {
            self.state = Some(s);
        }
        if let Some(n) = nbar {
            self.nbar = Some(n);
            self.xi_re = None;
            self.xi_im = None;
        }
        if let Some(text) = xi {
            let xi = parse_complex(text)?;
            self.xi_re = Some(xi.re);
            self.xi_im = Some(xi.im);
            self.nbar = None;
            self.xi_phase_rad = None;
        }
        if let Some(p) = xi_phase {
            self.xi_phase_rad = Some(p);
        }
        Ok(())
    }

    pub fn reject_state_keys(&self, why: &str) -> Result<(), CliError> {
        let given = [
            ("state", self.state.is_some()),
            ("nbar", self.nbar.is_some()),
            ("xi_re", self.xi_re.is_some()),
            ("xi_im", self.xi_im.is_some()),
            ("xi_phase_rad", self.xi_phase_rad.is_some()),
            ("eta", self.eta.is_some()),
            ("samples", self.samples.is_some()),
            ("seed", self.seed.is_some()),
        ];
        match given.iter().find(|(_, set)| *set) {
            Some((key, _)) => Err(CliError::Validation(format!("config key `{key}` not allowed: {why}"))),
            None => Ok(()),
        }
    }
}

/// `RE` or `RE,IM`.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Validation(format!("cannot parse complex number {text:?} (expected RE or RE,IM)"));
    let mut parts = text.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad()));
    let re = parts.next().ok_or_else(bad)??;
    let im = parts.next().transpose()?.unwrap_or(0.0);
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Clone, Copy)]
pub enum StateChoice {
    TwinBeam(TwinBeamState),
    Ghz,
}

/// A validated run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub state: StateChoice,
    pub eta: Efficiency,
    pub samples: usize,
    pub seed: u64,
    pub quad_order: usize,
    pub plan: PartitionPlan,
    pub threads: Option<usize>,
    pub observables: Vec<Observable>,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn from_file(f: ConfigFile) -> Result<Self, CliError> {
        let eta = Efficiency::new(f.eta.unwrap_or(1.0))?;
        let state = match f.state.as_deref().unwrap_or("twin-beam") {
            "twin-beam" => {
                let xi_given = f.xi_re.is_some() || f.xi_im.is_some();
                let state = match (f.nbar, xi_given) {
                    (Some(_), true) => {
                        return Err(CliError::Validation("give either nbar or xi, not both".into()))
                    }
                    (Some(n), false) => TwinBeamState::from_nbar(n, f.xi_phase_rad.unwrap_or(0.0))?,
                    (None, true) => {
                        if f.xi_phase_rad.is_some() {
                            return Err(CliError::Validation(
                                "xi_phase_rad only applies together with nbar".into(),
                            ));
                        }
                        TwinBeamState::new(Complex64::new(
                            f.xi_re.unwrap_or(0.0),
                            f.xi_im.unwrap_or(0.0),
                        ))?
                    }
                    (None, false) => TwinBeamState::from_nbar(2.0, f.xi_phase_rad.unwrap_or(0.0))?,
                };
                StateChoice::TwinBeam(state)
            }
            "ghz" => {
                if f.nbar.is_some() || f.xi_re.is_some() || f.xi_im.is_some() || f.xi_phase_rad.is_some() {
                    return Err(CliError::Validation("the GHZ state takes no nbar or xi".into()));
                }
                StateChoice::Ghz
            }
            other => {
                return Err(CliError::Validation(format!(
                    "unknown state {other:?} (expected twin-beam or ghz)"
                )))
            }
        };
        let samples = match f.samples {
            Some(0) => return Err(CliError::Validation("sample count must be positive".into())),
            Some(n) => usize::try_from(n)
                .map_err(|_| CliError::Validation(format!("sample count {n} too large")))?,
            None => DEFAULT_SAMPLES,
        };
        let quad_order = f.quad_order.unwrap_or(DEFAULT_ORDER);
        if !(1..=MAX_ORDER).contains(&quad_order) {
            return Err(homodyne_core::Error::QuadratureOrder(quad_order).into());
        }
        let plan = PartitionPlan::new(f.partitions.unwrap_or(DEFAULT_PARTITIONS))?;
        let observables = f
            .observables
            .unwrap_or_default()
            .iter()
            .map(|s| s.parse::<Observable>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RunConfig {
            state,
            eta,
            samples,
            seed: f.seed.unwrap_or(DEFAULT_SEED),
            quad_order,
            plan,
            threads: f.threads,
            observables,
            out: f.out.unwrap_or_else(|| PathBuf::from(".")),
        })
    }
}
