//! Fixtures shared by the kernel benchmarks.

use advmatch_core::adversary::random_pattern;
use advmatch_core::generator::{
    make_labeled, sample_database, sample_permutation, DEFAULT_MEMORY_CAP,
};
use advmatch_core::rng::SeedSpec;
use advmatch_core::{AlphabetDistribution, LabeledDatabase, UnlabeledDatabase};

pub fn uniform(k: usize) -> AlphabetDistribution {
    AlphabetDistribution::uniform(k).expect("k >= 2")
}

pub fn database(m: u64, n: usize, k: usize) -> UnlabeledDatabase {
    sample_database(m, n, &uniform(k), SeedSpec::new(1, 0), DEFAULT_MEMORY_CAP)
        .expect("fixture fits the memory cap")
}

/// `db` shuffled with `d` random columns deleted.
pub fn released(db: &UnlabeledDatabase, d: usize) -> LabeledDatabase {
    let perm = sample_permutation(db.rows(), SeedSpec::new(1, 1)).expect("rows >= 1");
    let pattern = random_pattern(db.cols(), d, SeedSpec::new(1, 2)).expect("d <= n");
    make_labeled(db, &perm, &pattern).expect("shapes agree")
}
