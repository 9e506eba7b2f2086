//! Matching a pair of categorical databases when an adversary deletes columns.
//!
//! The unlabeled database `D1` (`m x n`, i.i.d. entries) is released a second
//! time as `D2`: rows shuffled by a hidden permutation and a budget of `d`
//! columns deleted by an adversary who has seen `D1`. The matcher recovers the
//! deleted columns from column histograms, projects `D1` onto the surviving
//! columns and matches rows exactly.
//!
//! Modules:
//! - [`model`], [`hamming`]: shared types and the distance kernel.
//! - [`probability`]: capacities, binomial tails, Chernoff bounds and the exact
//!   histogram-collision oracle.
//! - [`generator`]: seeded synthesis of `D1`, the labeling and `D2`.
//! - [`adversary`]: deletion strategies, including an exhaustive oracle.
//! - [`detection`], [`matching`]: the matching scheme.
//! - [`experiments`]: the Monte Carlo harness.

pub mod adversary;
pub mod detection;
pub mod error;
pub mod experiments;
pub mod generator;
pub mod hamming;
pub mod matching;
pub mod model;
pub mod neighbors;
pub mod probability;
pub mod rng;

pub use error::{Error, Result};
pub use hamming::hamming_distance;
pub use model::{
    apply_pattern_complement, AlphabetDistribution, DeletionPattern, LabeledDatabase,
    LabelingPermutation, MatchEstimate, RowAssignment, Symbol, SymbolMatrix, UnlabeledDatabase,
};
