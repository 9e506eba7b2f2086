//! Synthesis of the unlabeled database, the hidden labeling and the
//! column-deleted labeled database.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;

use crate::error::{usage, Error, Result};
use crate::model::{
    AlphabetDistribution, DeletionPattern, LabeledDatabase, LabelingPermutation, Symbol,
    SymbolMatrix, UnlabeledDatabase,
};
use crate::rng::{SeedSpec, SymbolSampler};

/// Default cap on materialized entries (`m * n`).
pub const DEFAULT_MEMORY_CAP: u64 = 1 << 31;

/// Rows are generated in chunks, each from its own sub-stream, so any chunk
/// can be regenerated without the ones before it.
pub const ROWS_PER_CHUNK: usize = 4096;

/// `m = ceil(2^(nR))`. Values within `1e-9` relative of an integer snap to it
/// so that e.g. `n = 12, R = 0.5` gives exactly 64.
pub fn rows_for_rate(n: usize, rate: f64) -> Result<u64> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(usage!("rate {rate} must be finite and nonnegative"));
    }
    let exponent = n as f64 * rate;
    if exponent >= 63.0 {
        return Err(Error::Capacity(format!(
            "2^{exponent} rows do not fit in a 64-bit count"
        )));
    }
    let raw = exponent.exp2();
    let near = raw.round();
    let m = if (raw - near).abs() <= 1e-9 * near {
        near
    } else {
        raw.ceil()
    };
    Ok(m as u64)
}

/// `log2(m) / n`.
pub fn effective_rate(m: u64, n: usize) -> f64 {
    (m as f64).log2() / n as f64
}

/// `d = floor(n * delta)`, with the same integer snapping as [`rows_for_rate`].
pub fn deletions_for_budget(n: usize, delta: f64) -> Result<usize> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(usage!("deletion budget {delta} outside [0, 1]"));
    }
    let raw = n as f64 * delta;
    let near = raw.round();
    Ok(if (raw - near).abs() <= 1e-9 * near.max(1.0) {
        near
    } else {
        raw.floor()
    } as usize)
}

fn check_cap(m: u64, n: usize, cap: u64) -> Result<()> {
    match m.checked_mul(n as u64) {
        Some(entries) if entries <= cap => Ok(()),
        _ => Err(Error::Capacity(format!(
            "{m} x {n} database exceeds the memory cap of {cap} entries"
        ))),
    }
}

/// Calls `f(first_row, rows)` for each generated chunk of rows, in order,
/// until it breaks.
///
/// The rows are exactly those [`sample_database`] would materialize for the
/// same arguments.
pub fn for_each_row_chunk(
    m: u64,
    n: usize,
    dist: &AlphabetDistribution,
    seed: SeedSpec,
    mut f: impl FnMut(u64, &[Symbol]) -> ControlFlow<()>,
) {
    let sampler = SymbolSampler::new(dist);
    let mut buf = vec![0 as Symbol; ROWS_PER_CHUNK * n];
    let chunks = m.div_ceil(ROWS_PER_CHUNK as u64);
    for c in 0..chunks {
        let first = c * ROWS_PER_CHUNK as u64;
        let rows = (m - first).min(ROWS_PER_CHUNK as u64) as usize;
        let out = &mut buf[..rows * n];
        fill_chunk(&sampler, seed, c, n, out);
        if f(first, out).is_break() {
            return;
        }
    }
}

fn fill_chunk(sampler: &SymbolSampler, seed: SeedSpec, chunk: u64, n: usize, out: &mut [Symbol]) {
    let mut rng = seed.chunk_rng(chunk);
    for row in out.chunks_exact_mut(n) {
        sampler.fill(&mut rng, row);
    }
}

/// Regenerates the given rows (any order) without materializing the database.
pub fn regenerate_rows(
    m: u64,
    n: usize,
    dist: &AlphabetDistribution,
    seed: SeedSpec,
    rows: &[u64],
) -> Result<Vec<Vec<Symbol>>> {
    if let Some(&r) = rows.iter().find(|&&r| r >= m) {
        return Err(usage!("row {r} outside a {m}-row database"));
    }
    let sampler = SymbolSampler::new(dist);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_unstable_by_key(|&i| rows[i]);
    let mut out = vec![Vec::new(); rows.len()];
    let mut buf = vec![0 as Symbol; ROWS_PER_CHUNK * n];
    let mut loaded = None;
    for i in order {
        let c = rows[i] / ROWS_PER_CHUNK as u64;
        let first = c * ROWS_PER_CHUNK as u64;
        let len = (m - first).min(ROWS_PER_CHUNK as u64) as usize;
        if loaded != Some(c) {
            fill_chunk(&sampler, seed, c, n, &mut buf[..len * n]);
            loaded = Some(c);
        }
        let r = (rows[i] - first) as usize;
        out[i] = buf[r * n..(r + 1) * n].to_vec();
    }
    Ok(out)
}

/// `m x n` database with i.i.d. entries from `dist`; deterministic in `seed`.
pub fn sample_database(
    m: u64,
    n: usize,
    dist: &AlphabetDistribution,
    seed: SeedSpec,
    memory_cap: u64,
) -> Result<UnlabeledDatabase> {
    if m == 0 || n == 0 {
        return Err(usage!("database needs at least one row and column"));
    }
    check_cap(m, n, memory_cap)?;
    let mut data = Vec::with_capacity(m as usize * n);
    for_each_row_chunk(m, n, dist, seed, |_, rows| {
        data.extend_from_slice(rows);
        ControlFlow::Continue(())
    });
    UnlabeledDatabase::new(SymbolMatrix::from_parts_unchecked(
        m as usize,
        n,
        dist.alphabet_size(),
        data,
    ))
}

/// Uniform random labeling (Fisher-Yates).
pub fn sample_permutation(m: usize, seed: SeedSpec) -> Result<LabelingPermutation> {
    if m == 0 {
        return Err(usage!("permutation over zero rows"));
    }
    let mut forward: Vec<usize> = (0..m).collect();
    forward.shuffle(&mut seed.rng());
    LabelingPermutation::new(forward)
}

/// Shuffles rows by `perm` and removes the columns in `pattern`: row
/// `perm(i)` of the output is row `i` of `db` restricted to retained columns.
pub fn make_labeled(
    db: &UnlabeledDatabase,
    perm: &LabelingPermutation,
    pattern: &DeletionPattern,
) -> Result<LabeledDatabase> {
    if perm.len() != db.rows() {
        return Err(usage!(
            "permutation over {} rows for a {}-row database",
            perm.len(),
            db.rows()
        ));
    }
    if pattern.source_cols() != db.cols() {
        return Err(usage!(
            "pattern over {} columns for a {}-column database",
            pattern.source_cols(),
            db.cols()
        ));
    }
    let retained = pattern.retained();
    let k = retained.len();
    let mut data = vec![0 as Symbol; db.rows() * k];
    for (l, out) in data.chunks_exact_mut(k.max(1)).enumerate().take(db.rows()) {
        let src = db.row(perm.apply_inverse(l));
        for (o, &j) in out.iter_mut().zip(&retained) {
            *o = src[j];
        }
    }
    if k == 0 {
        data.clear();
    }
    Ok(LabeledDatabase::new(SymbolMatrix::from_parts_unchecked(
        db.rows(),
        k,
        db.alphabet_size(),
        data,
    )))
}
