//! Domain types shared by every stage of the simulator.

mod alphabet;
mod database;
mod estimate;
mod pattern;
mod permutation;

pub use alphabet::AlphabetDistribution;
pub use database::{LabeledDatabase, Symbol, SymbolMatrix, UnlabeledDatabase};
pub use estimate::{MatchEstimate, RowAssignment};
pub use pattern::{apply_pattern_complement, DeletionPattern};
pub use permutation::LabelingPermutation;
