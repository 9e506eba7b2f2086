//! Deletion strategies for a budget-`d` adversary who sees the unlabeled
//! database before choosing which columns to delete.
//!
//! All strategies return exactly `d` distinct columns. Ties are broken
//! lexicographically (smallest row pair, smallest column set) so every
//! strategy except [`random_pattern`] is a deterministic function of the
//! database.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{usage, Error, Result};
use crate::generator::make_labeled;
use crate::hamming::{differing_columns, hamming_unchecked};
use crate::matching::match_pipeline;
use crate::model::{DeletionPattern, LabelingPermutation, Symbol, UnlabeledDatabase};
use crate::neighbors::near_pairs;
use crate::rng::SeedSpec;

pub const DEFAULT_EXHAUSTIVE_BUDGET: u128 = 100_000;
/// Above this many rows the closest-pair search samples pairs.
pub const DEFAULT_PAIR_SCAN_LIMIT: usize = 1 << 14;
pub const DEFAULT_SAMPLED_PAIRS: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Random,
    MinPair,
    GreedyCover,
    Exhaustive,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Random,
        StrategyKind::MinPair,
        StrategyKind::GreedyCover,
        StrategyKind::Exhaustive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Random => "random",
            StrategyKind::MinPair => "min_pair",
            StrategyKind::GreedyCover => "greedy_cover",
            StrategyKind::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown strategy `{s}` (expected random, min_pair, greedy_cover or exhaustive)"
                ))
            })
    }
}

/// A strategy and its tuning knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdversaryStrategy {
    pub kind: StrategyKind,
    /// Largest `C(n, d)` the exhaustive search accepts.
    pub exhaustive_budget: u128,
    /// Row count above which min-pair search samples pairs.
    pub pair_scan_limit: usize,
    /// Pairs drawn in sampled mode.
    pub sampled_pairs: u64,
}

impl AdversaryStrategy {
    pub fn new(kind: StrategyKind) -> Self {
        Self {
            kind,
            exhaustive_budget: DEFAULT_EXHAUSTIVE_BUDGET,
            pair_scan_limit: DEFAULT_PAIR_SCAN_LIMIT,
            sampled_pairs: DEFAULT_SAMPLED_PAIRS,
        }
    }

    /// Picks a pattern. `seed` drives the random strategy and sampled pair
    /// search; the other strategies ignore it.
    pub fn choose(
        &self,
        db: &UnlabeledDatabase,
        d: usize,
        seed: SeedSpec,
    ) -> Result<ChosenPattern> {
        let exact = |pattern| ChosenPattern {
            pattern,
            heuristic: false,
            objective: None,
        };
        match self.kind {
            StrategyKind::Random => random_pattern(db.cols(), d, seed).map(exact),
            StrategyKind::MinPair if db.rows() > self.pair_scan_limit => Ok(ChosenPattern {
                pattern: min_pair_pattern_sampled(db, d, self.sampled_pairs, seed)?,
                heuristic: true,
                objective: None,
            }),
            StrategyKind::MinPair => min_pair_pattern(db, d).map(exact),
            StrategyKind::GreedyCover if db.rows() > self.pair_scan_limit => {
                let incumbent = min_pair_pattern_sampled(db, d, self.sampled_pairs, seed)?;
                Ok(ChosenPattern {
                    pattern: greedy_over_incumbent(db, d, incumbent)?,
                    heuristic: true,
                    objective: None,
                })
            }
            StrategyKind::GreedyCover => greedy_cover_pattern(db, d).map(exact),
            StrategyKind::Exhaustive => {
                let (pattern, value) =
                    exhaustive_worst_pattern(db, d, self.exhaustive_budget, |p| {
                        collision_objective(db, p)
                    })?;
                Ok(ChosenPattern {
                    pattern,
                    heuristic: false,
                    objective: Some(value),
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChosenPattern {
    pub pattern: DeletionPattern,
    /// Produced by sampled rather than exhaustive pair search.
    pub heuristic: bool,
    /// Objective value, for the exhaustive strategy.
    pub objective: Option<u64>,
}

fn check_budget(n: usize, d: usize) -> Result<()> {
    if d > n {
        return Err(usage!("budget of {d} deletions exceeds {n} columns"));
    }
    Ok(())
}

/// Oblivious baseline: a uniformly random `d`-subset of the columns.
pub fn random_pattern(n: usize, d: usize, seed: SeedSpec) -> Result<DeletionPattern> {
    check_budget(n, d)?;
    let mut cols = index::sample(&mut seed.rng(), n, d).into_vec();
    cols.sort_unstable();
    Ok(DeletionPattern::from_sorted_unchecked(n, cols))
}

/// Adds the smallest unmarked columns until `d` are marked.
fn pad_to(mut chosen: Vec<bool>, d: usize) -> DeletionPattern {
    let mut count = chosen.iter().filter(|&&c| c).count();
    for c in chosen.iter_mut() {
        if count >= d {
            break;
        }
        if !*c {
            *c = true;
            count += 1;
        }
    }
    let n = chosen.len();
    DeletionPattern::from_sorted_unchecked(
        n,
        chosen
            .into_iter()
            .enumerate()
            .filter_map(|(j, c)| c.then_some(j))
            .collect(),
    )
}

/// Pattern aimed at one pair: its differing columns, truncated to the `d`
/// smallest or padded with the smallest other columns.
fn pattern_for_pair(a: &[Symbol], b: &[Symbol], d: usize) -> DeletionPattern {
    let mut chosen = vec![false; a.len()];
    for j in differing_columns(a, b).into_iter().take(d) {
        chosen[j] = true;
    }
    pad_to(chosen, d)
}

/// Closest pair `(i, j, dist)`, smallest `(i, j)` among ties.
fn closest_pair(db: &UnlabeledDatabase) -> (usize, usize, usize) {
    let mut best = (0, 1, usize::MAX);
    for i in 0..db.rows() {
        let ri = db.row(i);
        for j in i + 1..db.rows() {
            let t = hamming_unchecked(ri, db.row(j));
            if t < best.2 {
                best = (i, j, t);
                if t == 0 {
                    return best;
                }
            }
        }
    }
    best
}

/// Targets the closest pair of rows: if it is within `d`, deleting its
/// differing columns makes the two rows identical after projection.
pub fn min_pair_pattern(db: &UnlabeledDatabase, d: usize) -> Result<DeletionPattern> {
    check_budget(db.cols(), d)?;
    if db.rows() < 2 {
        return Err(usage!("min-pair search needs at least two rows"));
    }
    let (i, j, _) = closest_pair(db);
    Ok(pattern_for_pair(db.row(i), db.row(j), d))
}

/// [`min_pair_pattern`] over `pairs` uniformly sampled pairs instead of all
/// of them.
pub fn min_pair_pattern_sampled(
    db: &UnlabeledDatabase,
    d: usize,
    pairs: u64,
    seed: SeedSpec,
) -> Result<DeletionPattern> {
    check_budget(db.cols(), d)?;
    let m = db.rows();
    if m < 2 {
        return Err(usage!("min-pair search needs at least two rows"));
    }
    let mut rng = seed.rng();
    let mut best = (0, 1, usize::MAX);
    for _ in 0..pairs.max(1) {
        let i = rng.random_range(0..m);
        let mut j = rng.random_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (i, j) = (i.min(j), i.max(j));
        let t = hamming_unchecked(db.row(i), db.row(j));
        if (t, i, j) < (best.2, best.0, best.1) {
            best = (i, j, t);
        }
    }
    Ok(pattern_for_pair(db.row(best.0), db.row(best.1), d))
}

/// Walks pairs within distance `d` in increasing `(dist, i, j)` order and
/// adds a pair's differing columns whenever the union still fits the budget,
/// colliding as many pairs as the greedy order allows.
///
/// The [`min_pair_pattern`] choice is kept as an incumbent: padding can make
/// it collide rows by accident, and the cover is returned only when it
/// collides at least as many rows.
pub fn greedy_cover_pattern(db: &UnlabeledDatabase, d: usize) -> Result<DeletionPattern> {
    let incumbent = min_pair_pattern(db, d)?;
    greedy_over_incumbent(db, d, incumbent)
}

fn greedy_over_incumbent(
    db: &UnlabeledDatabase,
    d: usize,
    incumbent: DeletionPattern,
) -> Result<DeletionPattern> {
    let cover = greedy_cover_set(db, d)?;
    if cover == incumbent
        || collision_objective(db, &cover)? >= collision_objective(db, &incumbent)?
    {
        Ok(cover)
    } else {
        Ok(incumbent)
    }
}

fn greedy_cover_set(db: &UnlabeledDatabase, d: usize) -> Result<DeletionPattern> {
    check_budget(db.cols(), d)?;
    if db.rows() < 2 {
        return Err(usage!("greedy cover needs at least two rows"));
    }
    let mut pairs = near_pairs(db, d);
    pairs.sort_unstable_by_key(|&(i, j, t)| (t, i, j));
    let mut chosen = vec![false; db.cols()];
    let mut used = 0;
    for (i, j, _) in pairs {
        let diff = differing_columns(db.row(i), db.row(j));
        let extra = diff.iter().filter(|&&c| !chosen[c]).count();
        if used + extra <= d {
            for c in diff {
                chosen[c] = true;
            }
            used += extra;
            if used == d {
                break;
            }
        }
    }
    Ok(pad_to(chosen, d))
}

/// `C(n, d)`, saturating.
pub fn pattern_count(n: usize, d: usize) -> u128 {
    if d > n {
        return 0;
    }
    let d = d.min(n - d) as u128;
    let mut c: u128 = 1;
    for i in 0..d {
        c = match c.checked_mul(n as u128 - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    c
}

/// All `d`-subsets of `0..n` in lexicographic order.
pub fn all_patterns(n: usize, d: usize) -> impl Iterator<Item = DeletionPattern> {
    let mut next = (d <= n).then(|| (0..d).collect::<Vec<usize>>());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        if let Some(i) = (0..d).rev().find(|&i| succ[i] < n - d + i) {
            succ[i] += 1;
            for t in i + 1..d {
                succ[t] = succ[t - 1] + 1;
            }
            next = Some(succ);
        }
        Some(DeletionPattern::from_sorted_unchecked(n, cur))
    })
}

/// Rows the scheme leaves in collision error when `pattern` is applied. The
/// labeling does not affect collisions, so the identity is used.
pub fn collision_objective(db: &UnlabeledDatabase, pattern: &DeletionPattern) -> Result<u64> {
    let d2 = make_labeled(db, &LabelingPermutation::identity(db.rows()), pattern)?;
    Ok(match_pipeline(db, &d2)?.collided_rows() as u64)
}

/// Evaluates `objective` on every `d`-subset and returns a maximizer, the
/// lexicographically first among ties. Patterns are scored in parallel and
/// reduced in enumeration order, so the answer does not depend on scheduling.
pub fn exhaustive_worst_pattern<F>(
    db: &UnlabeledDatabase,
    d: usize,
    budget: u128,
    objective: F,
) -> Result<(DeletionPattern, u64)>
where
    F: Fn(&DeletionPattern) -> Result<u64> + Sync,
{
    check_budget(db.cols(), d)?;
    let count = pattern_count(db.cols(), d);
    if count > budget {
        return Err(Error::Capacity(format!(
            "exhaustive search over C({}, {d}) = {count} patterns exceeds the budget of {budget}",
            db.cols()
        )));
    }
    let patterns: Vec<DeletionPattern> = all_patterns(db.cols(), d).collect();
    let values: Vec<Result<u64>> = patterns.par_iter().map(&objective).collect();
    let mut best: Option<(usize, u64)> = None;
    for (idx, v) in values.into_iter().enumerate() {
        let v = v?;
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((idx, v));
        }
    }
    let (idx, value) = best.expect("at least one pattern exists for d <= n");
    Ok((patterns[idx].clone(), value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{sample_database, DEFAULT_MEMORY_CAP};
    use crate::model::{apply_pattern_complement, AlphabetDistribution};

    fn one_based(p: &DeletionPattern) -> Vec<usize> {
        p.one_based()
    }

    #[test]
    fn random_pattern_edges() {
        let s = SeedSpec::new(1, 2);
        assert_eq!(random_pattern(7, 0, s).unwrap(), DeletionPattern::empty(7));
        assert_eq!(random_pattern(7, 7, s).unwrap(), DeletionPattern::full(7));
        assert!(random_pattern(3, 4, s).is_err());
        assert_eq!(
            random_pattern(9, 4, s).unwrap(),
            random_pattern(9, 4, s).unwrap()
        );
    }

    #[test]
    fn random_pattern_is_uniform() {
        let trials = 600_000u64;
        let mut counts = std::collections::HashMap::new();
        for t in 0..trials {
            let p = random_pattern(4, 2, SeedSpec::new(99, t)).unwrap();
            *counts.entry(p).or_insert(0u64) += 1;
        }
        assert_eq!(counts.len(), 6);
        let sigma = (trials as f64 * (1.0 / 6.0) * (5.0 / 6.0)).sqrt();
        for c in counts.values() {
            assert!((*c as f64 - trials as f64 / 6.0).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn min_pair_examples() {
        let db = UnlabeledDatabase::from_rows(
            4,
            &[[1, 1, 1, 2], [1, 1, 2, 2], [4, 3, 4, 1], [3, 4, 3, 4]],
        )
        .unwrap();
        assert_eq!(one_based(&min_pair_pattern(&db, 1).unwrap()), vec![3]);
        let twins =
            UnlabeledDatabase::from_rows(3, &[[1, 2, 3, 1, 2], [1, 2, 3, 1, 2], [3, 3, 3, 3, 3]])
                .unwrap();
        assert_eq!(one_based(&min_pair_pattern(&twins, 2).unwrap()), vec![1, 2]);
        let single = UnlabeledDatabase::from_rows(2, &[[1, 2]]).unwrap();
        assert!(min_pair_pattern(&single, 1).is_err());
    }

    #[test]
    fn min_pair_truncates_when_out_of_reach() {
        let db = UnlabeledDatabase::from_rows(2, &[[1, 1, 1, 1, 1], [2, 1, 2, 2, 1]]).unwrap();
        assert_eq!(one_based(&min_pair_pattern(&db, 2).unwrap()), vec![1, 3]);
        assert_eq!(
            one_based(&min_pair_pattern(&db, 4).unwrap()),
            vec![1, 2, 3, 4]
        );
    }

    #[test]
    fn greedy_examples() {
        let db = UnlabeledDatabase::from_rows(
            5,
            &[
                [1, 1, 1, 1, 1],
                [1, 2, 1, 1, 1],
                [3, 3, 3, 3, 4],
                [3, 3, 3, 3, 5],
                [5, 4, 2, 5, 2],
                [2, 5, 5, 2, 3],
            ],
        )
        .unwrap();
        assert_eq!(
            one_based(&greedy_cover_pattern(&db, 2).unwrap()),
            vec![2, 5]
        );
        assert_eq!(
            greedy_cover_pattern(&db, 0).unwrap(),
            DeletionPattern::empty(5)
        );
    }

    #[test]
    fn enumerates_all_patterns() {
        let all: Vec<_> = all_patterns(5, 2).map(|p| p.one_based()).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![1, 2]);
        assert_eq!(all[9], vec![4, 5]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all_patterns(4, 0).count(), 1);
        assert_eq!(all_patterns(4, 4).count(), 1);
        assert_eq!(pattern_count(16, 4), 1820);
        assert_eq!(pattern_count(3, 4), 0);
    }

    #[test]
    fn exhaustive_examples() {
        // all histograms distinct, rows pairwise at distance 4
        let db = UnlabeledDatabase::from_rows(
            4,
            &[[1, 1, 1, 1], [2, 2, 2, 2], [3, 3, 3, 4], [4, 4, 4, 3]],
        )
        .unwrap();
        let (p, v) =
            exhaustive_worst_pattern(&db, 2, 1000, |p| collision_objective(&db, p)).unwrap();
        assert_eq!(v, 0);
        assert_eq!(p.one_based(), vec![1, 2]);

        let dup = UnlabeledDatabase::from_rows(
            5,
            &[
                [1, 2, 3, 4, 5],
                [1, 2, 3, 4, 5],
                [2, 2, 4, 1, 1],
                [5, 3, 3, 3, 1],
            ],
        )
        .unwrap();
        for d in 0..=2 {
            for p in all_patterns(5, d) {
                let v = collision_objective(&dup, &p).unwrap();
                let gate_failed = {
                    let d2 = make_labeled(&dup, &LabelingPermutation::identity(4), &p).unwrap();
                    match_pipeline(&dup, &d2).unwrap().is_detection_error()
                };
                assert!(gate_failed || v >= 2);
            }
        }
        let err = exhaustive_worst_pattern(&db, 2, 5, |_| Ok(0));
        assert!(matches!(err, Err(Error::Capacity(_))));
    }

    #[test]
    fn strategies_emit_exactly_d_columns() {
        let dist = AlphabetDistribution::uniform(3).unwrap();
        for t in 0..30u64 {
            let db =
                sample_database(20, 9, &dist, SeedSpec::new(t, 5), DEFAULT_MEMORY_CAP).unwrap();
            for d in 0..=9 {
                for kind in StrategyKind::ALL {
                    let mut s = AdversaryStrategy::new(kind);
                    s.exhaustive_budget = 200;
                    match s.choose(&db, d, SeedSpec::new(t, 6)) {
                        Ok(c) => {
                            assert_eq!(c.pattern.deleted(), d, "{kind} d={d}");
                            assert_eq!(c.pattern.source_cols(), 9);
                        }
                        Err(Error::Capacity(_)) => assert_eq!(kind, StrategyKind::Exhaustive),
                        Err(e) => panic!("{kind}: {e}"),
                    }
                }
            }
        }
    }

    #[test]
    fn min_pair_realizes_collisions() {
        let dist = AlphabetDistribution::uniform(5).unwrap();
        for t in 0..200u64 {
            let db =
                sample_database(64, 12, &dist, SeedSpec::new(t, 8), DEFAULT_MEMORY_CAP).unwrap();
            let (i, j, dist_ij) = closest_pair(&db);
            for d in dist_ij..=(dist_ij + 2).min(12) {
                let p = min_pair_pattern(&db, d).unwrap();
                assert_eq!(
                    apply_pattern_complement(db.row(i), &p).unwrap(),
                    apply_pattern_complement(db.row(j), &p).unwrap()
                );
            }
        }
    }

    #[test]
    fn sampled_search_with_many_pairs_finds_the_exact_pair() {
        let dist = AlphabetDistribution::uniform(5).unwrap();
        let db = sample_database(12, 10, &dist, SeedSpec::new(3, 3), DEFAULT_MEMORY_CAP).unwrap();
        assert_eq!(
            min_pair_pattern_sampled(&db, 3, 100_000, SeedSpec::new(0, 0)).unwrap(),
            min_pair_pattern(&db, 3).unwrap()
        );
        let mut s = AdversaryStrategy::new(StrategyKind::MinPair);
        s.pair_scan_limit = 4;
        assert!(s.choose(&db, 3, SeedSpec::new(0, 0)).unwrap().heuristic);
    }
}
