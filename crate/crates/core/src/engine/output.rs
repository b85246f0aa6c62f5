use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EstimateRow;
use crate::error::{Error, Result};
use crate::states::StateDescriptor;

/// How the reported error bars are defined.
pub const ERROR_BAR_DEFINITION: &str = "standard error of the mean, sqrt(m2 / (n (n - 1)))";

/// Writes `observable,param1,param2,value,std_error,count` rows.
pub fn write_results_csv(rows: &[EstimateRow], path: &Path) -> Result<()> {
    let to_err = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_path(path).map_err(to_err)?;
    w.write_record(["observable", "param1", "param2", "value", "std_error", "count"])
        .map_err(to_err)?;
    for r in rows {
        w.write_record([
            r.observable.to_string(),
            r.param1.clone(),
            r.param2.clone(),
            format!("{:e}", r.estimate.value),
            format!("{:e}", r.estimate.std_error),
            r.estimate.count.to_string(),
        ])
        .map_err(to_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Provenance of a reconstruction or figure run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub code_version: String,
    /// Decimal string: TOML integers are signed 64-bit.
    pub seed: String,
    pub count: u64,
    pub quadrature_order: usize,
    pub partitions: usize,
    pub threads: usize,
    pub observables: Vec<String>,
    pub error_bars: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples_sha256: Option<String>,
    pub state: StateDescriptor,
}

impl RunManifest {
    pub fn new(
        seed: u64,
        state: StateDescriptor,
        count: usize,
        quadrature_order: usize,
        partitions: usize,
        threads: usize,
        observables: Vec<String>,
    ) -> Self {
        RunManifest {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: seed.to_string(),
            count: count as u64,
            quadrature_order,
            partitions,
            threads,
            observables,
            error_bars: ERROR_BAR_DEFINITION.to_string(),
            samples_sha256: None,
            state,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Format(format!("run manifest: {e}")))
    }
}
