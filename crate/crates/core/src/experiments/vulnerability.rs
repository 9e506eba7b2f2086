use std::ops::ControlFlow;

use rand::seq::index;

use crate::error::{usage, Result};
use crate::generator::{for_each_row_chunk, regenerate_rows};
use crate::model::{AlphabetDistribution, SymbolMatrix};
use crate::neighbors::{vulnerable_rows, QueryIndex};
use crate::rng::SeedSpec;

/// Sampled row indices, increasing.
fn sample_rows(m: u64, sample: usize, seed: SeedSpec) -> Vec<u64> {
    let count = (sample as u64).min(m) as usize;
    let mut ids: Vec<u64> = index::sample(&mut seed.rng(), m as usize, count)
        .into_iter()
        .map(|i| i as u64)
        .collect();
    ids.sort_unstable();
    ids
}

/// Fraction of rows with another row within Hamming distance `d`: exactly
/// the rows some `d`-deletion pattern can force into a collision.
///
/// With `row_sample = Some(s)`, `s` rows are drawn uniformly without
/// replacement (stream `seed`) and the fraction among them is returned, an
/// unbiased estimate of the exact value.
pub fn vulnerable_fraction(
    db: &SymbolMatrix,
    d: usize,
    row_sample: Option<usize>,
    seed: SeedSpec,
) -> Result<f64> {
    if d > db.cols() {
        return Err(usage!("budget {d} exceeds {} columns", db.cols()));
    }
    let m = db.rows();
    if m == 0 {
        return Ok(0.0);
    }
    match row_sample {
        None => {
            let flags = vulnerable_rows(db, d);
            Ok(flags.iter().filter(|&&f| f).count() as f64 / m as f64)
        }
        Some(s) => {
            let ids = sample_rows(m as u64, s, seed);
            let queries = ids.iter().map(|&i| db.row(i as usize).to_vec()).collect();
            let mut index = QueryIndex::new(queries, ids, db.cols(), db.alphabet_size(), d);
            index.scan(0, db.as_slice());
            Ok(fraction(index.found()))
        }
    }
}

fn fraction(flags: &[bool]) -> f64 {
    if flags.is_empty() {
        return 0.0;
    }
    flags.iter().filter(|&&f| f).count() as f64 / flags.len() as f64
}

/// Sampled [`vulnerable_fraction`] of the database
/// `sample_database(m, n, dist, db_seed)` without materializing it: the
/// sampled rows are regenerated, then every row is streamed past them.
///
/// Returns exactly what the materialized computation returns for the same
/// seeds, at `O(sample * n)` memory.
pub fn streamed_vulnerable_fraction(
    m: u64,
    n: usize,
    dist: &AlphabetDistribution,
    db_seed: SeedSpec,
    d: usize,
    row_sample: usize,
    sample_seed: SeedSpec,
) -> Result<f64> {
    if d > n {
        return Err(usage!("budget {d} exceeds {n} columns"));
    }
    if m == 0 || row_sample == 0 {
        return Err(usage!("need at least one row and one sampled row"));
    }
    let ids = sample_rows(m, row_sample, sample_seed);
    let queries = regenerate_rows(m, n, dist, db_seed, &ids)?;
    let mut index = QueryIndex::new(queries, ids, n, dist.alphabet_size(), d);
    for_each_row_chunk(m, n, dist, db_seed, |first, rows| {
        index.scan(first, rows);
        if index.all_found() {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(fraction(index.found()))
}
