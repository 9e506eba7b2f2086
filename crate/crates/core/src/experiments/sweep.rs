use super::config::TrialConfig;
use super::stats::MeanStderr;
use super::trial::{run_trials, TrialOutcome};
use crate::adversary::StrategyKind;
use crate::error::Result;
use crate::probability::{adv_capacity, random_capacity};

/// Aggregate of one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub n: usize,
    pub m: u64,
    pub rate_eff: f64,
    pub delta_eff: f64,
    pub strategy: StrategyKind,
    pub trials: u64,
    pub error: MeanStderr,
    pub vulnerable: MeanStderr,
    pub detection_error_rate: f64,
    /// Capacities at the effective budget.
    pub c_adv: f64,
    pub c_random: f64,
    /// `rate_eff - c_adv`
    pub margin: f64,
    /// Some trial used sampled pair search.
    pub heuristic: bool,
}

pub fn summarize(cfg: &TrialConfig, outcomes: &[TrialOutcome]) -> Result<CellSummary> {
    let rate_eff = cfg.rate_eff()?;
    let delta_eff = cfg.delta_eff()?;
    let c_adv = adv_capacity(&cfg.dist, delta_eff);
    let detections = outcomes.iter().filter(|o| o.detection_error).count();
    Ok(CellSummary {
        n: cfg.n,
        m: cfg.row_count()?,
        rate_eff,
        delta_eff,
        strategy: cfg.strategy.kind,
        trials: outcomes.len() as u64,
        error: outcomes.iter().map(|o| o.error_fraction).collect(),
        vulnerable: outcomes.iter().map(|o| o.vulnerable_fraction).collect(),
        detection_error_rate: if outcomes.is_empty() {
            0.0
        } else {
            detections as f64 / outcomes.len() as f64
        },
        c_adv,
        c_random: random_capacity(&cfg.dist, delta_eff),
        margin: rate_eff - c_adv,
        heuristic: outcomes.iter().any(|o| o.heuristic),
    })
}

/// Runs every cell; a failing cell yields its error without stopping the rest.
pub fn sweep(grid: &[TrialConfig]) -> Vec<Result<CellSummary>> {
    grid.iter()
        .map(|cfg| run_trials(cfg).and_then(|outs| summarize(cfg, &outs)))
        .collect()
}
