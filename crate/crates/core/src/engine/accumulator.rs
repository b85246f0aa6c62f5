use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Running count, mean and sum of squared deviations (Welford), mergeable
/// across partitions (Chan et al. pairwise update).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Accumulator {
    count: u64,
    mean: f64,
    m2: f64,
}

/// Sample mean with its standard error, `sqrt(m2 / (n (n - 1)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub count: u64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one value. Non-finite values are rejected and reported with their
    /// position in this accumulator's stream.
    pub fn push(&mut self, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFiniteValue { index: self.count });
        }
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
        Ok(())
    }

    /// Functional form of [`Accumulator::push`].
    pub fn accumulate(mut self, value: f64) -> Result<Self> {
        self.push(value)?;
        Ok(self)
    }

    pub fn merge(&self, other: &Accumulator) -> Accumulator {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let count = self.count + other.count;
        let (na, nb, n) = (self.count as f64, other.count as f64, count as f64);
        let delta = other.mean - self.mean;
        Accumulator {
            count,
            mean: self.mean + delta * nb / n,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// `None` below two values, where the standard error is undefined.
    pub fn estimate(&self) -> Option<Estimate> {
        if self.count < 2 {
            return None;
        }
        let n = self.count as f64;
        Some(Estimate {
            value: self.mean,
            std_error: (self.m2 / (n * (n - 1.0))).sqrt(),
            count: self.count,
        })
    }
}

impl Estimate {
    /// `(value - truth) / std_error`
    pub fn z_score(&self, truth: f64) -> f64 {
        (self.value - truth) / self.std_error
    }
}
