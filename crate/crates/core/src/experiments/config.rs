use crate::adversary::{AdversaryStrategy, StrategyKind};
use crate::error::{usage, Result};
use crate::generator::{deletions_for_budget, effective_rate, rows_for_rate, DEFAULT_MEMORY_CAP};
use crate::model::AlphabetDistribution;

/// How the row count is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowCount {
    /// Growth rate `R` in bits per column; `m = ceil(2^(nR))`.
    Rate(f64),
    Explicit(u64),
}

/// One cell of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub dist: AlphabetDistribution,
    pub n: usize,
    pub rows: RowCount,
    /// Deletion budget; `d = floor(n * delta)`.
    pub delta: f64,
    pub strategy: AdversaryStrategy,
    pub trials: u64,
    pub master_seed: u64,
    /// Estimate the vulnerable fraction from this many sampled rows instead
    /// of all of them.
    pub row_sample: Option<usize>,
    pub memory_cap: u64,
}

impl TrialConfig {
    pub fn new(dist: AlphabetDistribution, n: usize, rows: RowCount, delta: f64) -> Self {
        Self {
            dist,
            n,
            rows,
            delta,
            strategy: AdversaryStrategy::new(StrategyKind::MinPair),
            trials: 1,
            master_seed: 0,
            row_sample: None,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }

    pub fn with_strategy(mut self, kind: StrategyKind) -> Self {
        self.strategy.kind = kind;
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_row_sample(mut self, rows: Option<usize>) -> Self {
        self.row_sample = rows;
        self
    }

    pub fn row_count(&self) -> Result<u64> {
        match self.rows {
            RowCount::Rate(r) => rows_for_rate(self.n, r),
            RowCount::Explicit(0) => Err(usage!("row count must be positive")),
            RowCount::Explicit(m) => Ok(m),
        }
    }

    pub fn deletions(&self) -> Result<usize> {
        deletions_for_budget(self.n, self.delta)
    }

    /// `log2(m) / n` for the derived row count.
    pub fn rate_eff(&self) -> Result<f64> {
        Ok(effective_rate(self.row_count()?, self.n))
    }

    /// `d / n`.
    pub fn delta_eff(&self) -> Result<f64> {
        Ok(self.deletions()? as f64 / self.n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(usage!("column count n must be positive"));
        }
        if self.trials == 0 {
            return Err(usage!("trial count must be positive"));
        }
        if self.row_sample == Some(0) {
            return Err(usage!("row sample must be positive"));
        }
        self.row_count()?;
        self.deletions()?;
        Ok(())
    }
}
