//! Experiment configuration and the JSON run record written by `montecarlo`.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub d: usize,
    pub p: usize,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub precision: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialResult {
    pub index: usize,
    pub found: bool,
    /// `exact` for exhaustive bisection search, `heuristic` for local search.
    pub method: String,
    /// Maximum bisection size, when the graph is small enough to compute it.
    pub max_bisection: Option<usize>,
    pub obstructed: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub found: usize,
    pub fraction: f64,
    /// 95% Wilson score interval for the existence probability.
    pub ci_low: f64,
    pub ci_high: f64,
    pub obstructed: usize,
}

impl Summary {
    pub fn from_trials(trials: &[TrialResult]) -> Self {
        let total = trials.len();
        let found = trials.iter().filter(|t| t.found).count();
        let obstructed = trials.iter().filter(|t| t.obstructed == Some(true)).count();
        let (ci_low, ci_high) = wilson_interval(found, total, 1.959_963_984_540_054);
        let fraction = if total == 0 { 0.0 } else { found as f64 / total as f64 };
        Self { trials: total, found, fraction, ci_low, ci_high, obstructed }
    }

    pub fn csv_header() -> &'static str {
        "d,p,n,trials,found,fraction,ci_low,ci_high,obstructed"
    }

    pub fn csv_row(&self, config: &ExperimentConfig) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            config.d, config.p, config.n, self.trials, self.found, self.fraction, self.ci_low, self.ci_high, self.obstructed
        )
    }
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let centre = (phat + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    pub toolkit_version: String,
    pub config: ExperimentConfig,
    pub trials: Vec<TrialResult>,
    pub summary: Summary,
}

impl RunRecord {
    pub fn new(config: ExperimentConfig, mut trials: Vec<TrialResult>) -> Self {
        trials.sort_by_key(|t| t.index);
        let summary = Summary::from_trials(&trials);
        Self { schema: SCHEMA_VERSION, toolkit_version: env!("CARGO_PKG_VERSION").to_string(), config, trials, summary }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let record: Self = serde_json::from_str(text)?;
        anyhow::ensure!(record.schema == SCHEMA_VERSION, "unsupported schema version {}", record.schema);
        Ok(record)
    }

    /// Recomputes the summary from the stored trials.
    pub fn resummarize(&self) -> Summary {
        Summary::from_trials(&self.trials)
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", Summary::csv_header(), self.summary.csv_row(&self.config))
    }
}
