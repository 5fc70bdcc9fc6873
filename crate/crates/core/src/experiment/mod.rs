//! Monte Carlo experiments: threshold sweeps and bisection over the
//! monotone coupling, factor-count experiments, and the config-driven
//! runner that persists their results.
//!
//! Every trial's randomness is a function of `(base seed, family, n,
//! trial)`; the retention probability never enters a seed, so a trial that
//! succeeds at `p` succeeds at every `p' ≥ p`.

mod config;
mod counts;
mod threshold;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::generators::Family;
use crate::seed;

pub use config::{parse_config, run, run_config, Experiment, ExperimentConfig, RunSummary};
pub use counts::{expected_factor_count, factor_count_experiment, FactorCountReport};
pub use threshold::{
    estimate_threshold, normalized_constant, sweep_csv, threshold_sweep, SweepConfig, ThresholdEstimate,
    ThresholdPoint, ThresholdResult, TrialOutcome, TrialRecord, CSV_HEADER, RESOLUTION,
};

/// Version tag written into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

/// Per-trial solver limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialBudget {
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
}

impl Default for TrialBudget {
    fn default() -> Self {
        TrialBudget {
            max_nodes: None,
            timeout: Some(Duration::from_secs(10)),
        }
    }
}

impl TrialBudget {
    pub fn unlimited() -> Self {
        TrialBudget {
            max_nodes: None,
            timeout: None,
        }
    }
}

/// Seed of one trial; independent of `p`.
pub fn trial_seed(base: u64, family: &Family, n: usize, trial: usize) -> u64 {
    seed::mix(&[base, seed::tag(family.tag()), n as u64, trial as u64])
}
