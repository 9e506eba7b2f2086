//! Monte Carlo harness: determinism, calibration and aggregation.

use advmatch_core::adversary::StrategyKind;
use advmatch_core::experiments::{
    run_trials, run_vulnerability_trials, sweep, MeanStderr, RowCount, TrialConfig,
};
use advmatch_core::probability::binom_cdf;
use advmatch_core::AlphabetDistribution;
use proptest::prelude::*;

fn unif5() -> AlphabetDistribution {
    AlphabetDistribution::uniform(5).unwrap()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn trial_results_do_not_depend_on_worker_count() {
    let cfg = TrialConfig::new(unif5(), 12, RowCount::Rate(0.7), 0.25)
        .with_strategy(StrategyKind::GreedyCover)
        .with_trials(8)
        .with_seed(99);
    let one = in_pool(1, || run_trials(&cfg).unwrap());
    let four = in_pool(4, || run_trials(&cfg).unwrap());
    assert_eq!(one.len(), 8);
    for (a, b) in one.iter().zip(&four) {
        assert!(a.same_result(b));
    }
}

#[test]
fn sweep_output_is_a_function_of_grid_and_seed() {
    let grid: Vec<_> = [0.5, 0.9, 1.2]
        .iter()
        .map(|&r| {
            TrialConfig::new(unif5(), 10, RowCount::Rate(r), 0.3)
                .with_trials(4)
                .with_seed(7)
        })
        .collect();
    let a: Vec<_> = sweep(&grid).into_iter().map(Result::unwrap).collect();
    let b: Vec<_> = in_pool(3, || sweep(&grid))
        .into_iter()
        .map(Result::unwrap)
        .collect();
    assert_eq!(a, b);
}

#[test]
fn small_database_vulnerability_matches_the_binomial_prediction() {
    let cfg = TrialConfig::new(unif5(), 12, RowCount::Explicit(64), 0.25)
        .with_trials(400)
        .with_seed(11);
    let stats: MeanStderr = run_vulnerability_trials(&cfg)
        .unwrap()
        .iter()
        .map(|o| o.vulnerable_fraction)
        .collect();
    let p = binom_cdf(12, 0.8, 3).unwrap();
    let predicted = 1.0 - (1.0 - p).powi(63);
    assert!(
        (stats.mean() - predicted).abs() <= 5.0 * stats.stderr().max(1e-4),
        "{} vs {predicted}",
        stats.mean()
    );
}

#[test]
fn min_pair_errors_never_exceed_the_vulnerable_fraction() {
    let cfg = TrialConfig::new(unif5(), 10, RowCount::Explicit(150), 0.3)
        .with_trials(20)
        .with_seed(5);
    for out in run_trials(&cfg).unwrap() {
        if !out.detection_error {
            // collisions are realized only between rows within distance d
            assert!(out.error_fraction <= out.vulnerable_fraction + 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn aggregation_is_order_independent(xs in prop::collection::vec(0.0f64..1.0, 1..40), split in 0usize..40) {
        let whole: MeanStderr = xs.iter().copied().collect();
        let split = split.min(xs.len());
        let mut left: MeanStderr = xs[..split].iter().copied().collect();
        let right: MeanStderr = xs[split..].iter().rev().copied().collect();
        left.merge(&right);
        prop_assert!((whole.mean() - left.mean()).abs() < 1e-12);
        prop_assert!((whole.stderr() - left.stderr()).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&whole.mean()));
    }
}
