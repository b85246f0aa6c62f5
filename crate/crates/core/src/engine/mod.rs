//! Monte-Carlo averaging: one pass over a dataset evaluates every requested
//! estimator on every sample and reports means with standard errors.
//!
//! The dataset is cut into a fixed number of contiguous partitions, each is
//! reduced independently (in parallel when threads are available), and the
//! partial accumulators are merged in partition order. Results depend on the
//! partition count but not on the number of threads.
//!
//! Observables evaluated on the same dataset have correlated statistical
//! errors.

mod accumulator;
mod observable;
mod output;

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{GhzTerms, HomodyneSample};
use crate::specfun::QuadratureRule;
use crate::states::{SampleData, SampleSet};

pub use accumulator::{Accumulator, Estimate};
pub use observable::Observable;
pub use output::{write_results_csv, RunManifest, ERROR_BAR_DEFINITION};

use observable::GhzJob;

/// Number of contiguous partitions a dataset is reduced in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionPlan {
    partitions: usize,
}

impl Default for PartitionPlan {
    fn default() -> Self {
        PartitionPlan { partitions: 64 }
    }
}

impl PartitionPlan {
    pub fn new(partitions: usize) -> Result<Self> {
        if partitions == 0 {
            return Err(Error::Partitions);
        }
        Ok(PartitionPlan { partitions })
    }

    pub fn partitions(&self) -> usize {
        self.partitions
    }

    /// Near-equal contiguous ranges covering `0..len`; empty ranges are dropped.
    pub fn ranges(&self, len: usize) -> Vec<Range<usize>> {
        let p = self.partitions;
        (0..p)
            .map(|k| (k * len / p)..((k + 1) * len / p))
            .filter(|r| !r.is_empty())
            .collect()
    }
}

/// One output line: which observable, its parameters, and the estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub observable: &'static str,
    pub param1: String,
    pub param2: String,
    pub estimate: Estimate,
}

/// Averages every observable over the dataset in one pass.
pub fn evaluate(
    dataset: &SampleSet,
    observables: &[Observable],
    rule: &QuadratureRule,
    plan: &PartitionPlan,
) -> Result<Vec<EstimateRow>> {
    if observables.is_empty() {
        return Err(Error::NoObservables);
    }
    if dataset.len() < 2 {
        return Err(Error::Format(
            "at least two samples are needed for a standard error".into(),
        ));
    }
    let eff = dataset.efficiency();
    let (labels, partials) = match dataset.data() {
        SampleData::TwinBeam(records) => {
            let (labels, jobs) = observable::compile_twin(observables, rule, eff.kappa())?;
            let width = labels.len();
            let partials = reduce(plan, records.len(), width, |range, accs| {
                let mut scratch = observable::TwinScratch::new(&jobs);
                let mut values = vec![0.0; width];
                for i in range {
                    let s = records[i].to_sample(eff).map_err(|e| at_index(e, i))?;
                    scratch.prepare(&s, rule);
                    for job in &jobs {
                        job.evaluate(&s, rule, &mut scratch, &mut values)
                            .map_err(|e| at_index(e, i))?;
                    }
                    push_all(accs, &values, i)?;
                }
                Ok(())
            })?;
            (labels, partials)
        }
        SampleData::Ghz(events) => {
            let (labels, jobs) = observable::compile_ghz(observables)?;
            let width = labels.len();
            let nodes = observable::ghz_nodes(rule, eff.kappa());
            let partials = reduce(plan, events.len(), width, |range, accs| {
                let mut values = vec![0.0; width];
                for i in range {
                    let beams: Vec<HomodyneSample> = events[i]
                        .iter()
                        .map(|r| r.to_sample(eff))
                        .collect::<Result<_>>()
                        .map_err(|e| at_index(e, i))?;
                    let terms = GhzTerms::with_nodes(&beams, rule, nodes).map_err(|e| at_index(e, i))?;
                    for GhzJob { phis, offset } in &jobs {
                        for (k, &phi) in phis.iter().enumerate() {
                            values[offset + k] = terms.overlap(phi);
                        }
                    }
                    push_all(accs, &values, i)?;
                }
                Ok(())
            })?;
            (labels, partials)
        }
    };
    Ok(labels
        .into_iter()
        .zip(partials)
        .map(|((observable, param1, param2), acc)| EstimateRow {
            observable,
            param1,
            param2,
            estimate: acc.estimate().expect("dataset has at least two samples"),
        })
        .collect())
}

fn at_index(e: Error, index: usize) -> Error {
    match e {
        Error::NonFiniteValue { .. } => Error::NonFiniteValue {
            index: index as u64,
        },
        other => Error::Format(format!("sample {index}: {other}")),
    }
}

fn push_all(accs: &mut [Accumulator], values: &[f64], index: usize) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue {
            index: index as u64,
        });
    }
    for (a, &v) in accs.iter_mut().zip(values) {
        a.push(v)?;
    }
    Ok(())
}

/// Runs `work` on every partition and merges the per-partition accumulators
/// in partition order.
fn reduce<F>(plan: &PartitionPlan, len: usize, width: usize, work: F) -> Result<Vec<Accumulator>>
where
    F: Fn(Range<usize>, &mut [Accumulator]) -> Result<()> + Sync,
{
    let partials: Vec<Result<Vec<Accumulator>>> = plan
        .ranges(len)
        .into_par_iter()
        .map(|range| {
            let mut accs = vec![Accumulator::new(); width];
            work(range, &mut accs)?;
            Ok(accs)
        })
        .collect();
    let mut total = vec![Accumulator::new(); width];
    for part in partials {
        let part = part?;
        for (t, p) in total.iter_mut().zip(&part) {
            *t = t.merge(p);
        }
    }
    Ok(total)
}
