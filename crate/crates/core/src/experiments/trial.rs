use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::config::TrialConfig;
use super::vulnerability::{streamed_vulnerable_fraction, vulnerable_fraction};
use crate::adversary::{random_pattern, ChosenPattern, StrategyKind};
use crate::error::Result;
use crate::generator::{make_labeled, sample_database, sample_permutation};
use crate::matching::{match_pipeline, score};
use crate::model::{LabeledDatabase, LabelingPermutation, UnlabeledDatabase};
use crate::rng::{Purpose, SeedSpec};

/// Result of one pipeline trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub trial: u64,
    pub m: u64,
    pub d: usize,
    pub error_fraction: f64,
    pub detection_error: bool,
    pub collided_rows: usize,
    pub vulnerable_fraction: f64,
    /// The adversary fell back to sampled pair search.
    pub heuristic: bool,
    pub wall_time: Duration,
}

impl TrialOutcome {
    /// Equality ignoring wall time.
    pub fn same_result(&self, other: &Self) -> bool {
        Self {
            wall_time: Duration::ZERO,
            ..self.clone()
        } == Self {
            wall_time: Duration::ZERO,
            ..other.clone()
        }
    }
}

/// Everything one trial generates: the public database, the hidden labeling,
/// the adversary's choice and the released database.
#[derive(Debug, Clone)]
pub struct TrialInstance {
    pub d1: UnlabeledDatabase,
    pub labeling: LabelingPermutation,
    pub chosen: ChosenPattern,
    pub d2: LabeledDatabase,
}

/// Draws the instance of trial `trial`. Each ingredient has its own stream,
/// so changing the strategy leaves the databases untouched.
pub fn build_instance(cfg: &TrialConfig, trial: u64) -> Result<TrialInstance> {
    cfg.validate()?;
    let (m, d) = (cfg.row_count()?, cfg.deletions()?);
    let seed = |p| SeedSpec::for_trial(cfg.master_seed, trial, p);
    let d1 = sample_database(m, cfg.n, &cfg.dist, seed(Purpose::Database), cfg.memory_cap)?;
    let labeling = sample_permutation(d1.rows(), seed(Purpose::Permutation))?;
    let chosen = if d1.rows() < 2 && cfg.strategy.kind != StrategyKind::Random {
        // a single row cannot collide, so every pattern is equally bad
        ChosenPattern {
            pattern: random_pattern(cfg.n, d, seed(Purpose::Pattern))?,
            heuristic: false,
            objective: None,
        }
    } else {
        cfg.strategy.choose(&d1, d, seed(Purpose::Pattern))?
    };
    let d2 = make_labeled(&d1, &labeling, &chosen.pattern)?;
    Ok(TrialInstance {
        d1,
        labeling,
        chosen,
        d2,
    })
}

/// Runs the matcher on the trial's instance and scores the estimate against
/// the hidden labeling.
pub fn run_trial(cfg: &TrialConfig, trial: u64) -> Result<TrialOutcome> {
    let start = Instant::now();
    let inst = build_instance(cfg, trial)?;
    let d = inst.chosen.pattern.deleted();
    let est = match_pipeline(&inst.d1, &inst.d2)?;
    let row_seed = SeedSpec::for_trial(cfg.master_seed, trial, Purpose::RowSample);
    let vulnerable = vulnerable_fraction(&inst.d1, d, cfg.row_sample, row_seed)?;
    Ok(TrialOutcome {
        trial,
        m: inst.d1.rows() as u64,
        d,
        error_fraction: score(&est, &inst.labeling)?,
        detection_error: est.is_detection_error(),
        collided_rows: est.collided_rows(),
        vulnerable_fraction: vulnerable,
        heuristic: inst.chosen.heuristic,
        wall_time: start.elapsed(),
    })
}

/// All trials of a cell, in trial order. Runs on the current rayon pool.
pub fn run_trials(cfg: &TrialConfig) -> Result<Vec<TrialOutcome>> {
    cfg.validate()?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Result of a pattern-free vulnerability trial.
#[derive(Debug, Clone, PartialEq)]
pub struct VulnerabilityOutcome {
    pub trial: u64,
    pub m: u64,
    pub d: usize,
    pub vulnerable_fraction: f64,
    /// Computed by streaming rows past a sample rather than materializing.
    pub streamed: bool,
    pub wall_time: Duration,
}

/// Vulnerable fraction of the trial's database. With a row sample the
/// database is streamed, so the memory cap does not apply; otherwise it is
/// materialized and every row is examined. Uses the same streams as
/// [`run_trial`], so both report the same value.
pub fn run_vulnerability_trial(cfg: &TrialConfig, trial: u64) -> Result<VulnerabilityOutcome> {
    let start = Instant::now();
    cfg.validate()?;
    let (m, d) = (cfg.row_count()?, cfg.deletions()?);
    let seed = |p| SeedSpec::for_trial(cfg.master_seed, trial, p);
    let fraction = match cfg.row_sample {
        Some(s) => streamed_vulnerable_fraction(
            m,
            cfg.n,
            &cfg.dist,
            seed(Purpose::Database),
            d,
            s,
            seed(Purpose::RowSample),
        )?,
        None => {
            let db = sample_database(m, cfg.n, &cfg.dist, seed(Purpose::Database), cfg.memory_cap)?;
            vulnerable_fraction(&db, d, None, seed(Purpose::RowSample))?
        }
    };
    Ok(VulnerabilityOutcome {
        trial,
        m,
        d,
        vulnerable_fraction: fraction,
        streamed: cfg.row_sample.is_some(),
        wall_time: start.elapsed(),
    })
}

pub fn run_vulnerability_trials(cfg: &TrialConfig) -> Result<Vec<VulnerabilityOutcome>> {
    cfg.validate()?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_vulnerability_trial(cfg, t))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
