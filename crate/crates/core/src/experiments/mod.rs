//! Monte Carlo harness.
//!
//! Every trial is a pure function of `(config, master_seed, trial_index)`:
//! the database, labeling, adversary and row-sample streams are derived with
//! [`crate::rng::SeedSpec::for_trial`]. Trials may run on any number of
//! workers; outcomes are collected in trial order before aggregation.

mod capacity;
mod config;
mod histograms;
mod stats;
mod sweep;
mod trial;
mod vulnerability;

pub use capacity::{capacity_curve, CapacityRow};
pub use config::{RowCount, TrialConfig};
pub use histograms::{
    histogram_collision_monte_carlo, histogram_uniqueness_study, HistogramStudyRow,
};
pub use stats::MeanStderr;
pub use sweep::{summarize, sweep, CellSummary};
pub use trial::{
    build_instance, run_trial, run_trials, run_vulnerability_trial, run_vulnerability_trials,
    TrialInstance, TrialOutcome, VulnerabilityOutcome,
};
pub use vulnerability::{streamed_vulnerable_fraction, vulnerable_fraction};
