//! Histogram-based deletion detection.
//!
//! A column's histogram is invariant under row permutation, so each retained
//! column of the unlabeled database reappears, histogram intact, in the
//! labeled one. Columns whose histogram is missing were deleted. The only
//! failure is two unlabeled columns sharing a histogram; the scheme refuses to
//! guess in that case and reports a detection error.

use std::collections::{HashMap, HashSet};

use crate::error::{usage, Error, Result};
use crate::model::{DeletionPattern, SymbolMatrix};

/// Per-column symbol counts, `alphabet x cols`, stored column-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistogramMatrix {
    alphabet: usize,
    rows: usize,
    cols: usize,
    counts: Vec<u32>,
}

impl HistogramMatrix {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    /// Row count `m` of the database the histograms came from.
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Counts of column `j`; entry `i` is the number of occurrences of symbol `i + 1`.
    pub fn column(&self, j: usize) -> &[u32] {
        &self.counts[j * self.alphabet..(j + 1) * self.alphabet]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        (0..self.cols).map(move |j| self.column(j))
    }
}

pub fn column_histograms(db: &SymbolMatrix) -> HistogramMatrix {
    let (k, n) = (db.alphabet_size(), db.cols());
    let mut counts = vec![0u32; k * n];
    for row in db.row_iter() {
        for (j, &s) in row.iter().enumerate() {
            counts[j * k + s as usize - 1] += 1;
        }
    }
    HistogramMatrix {
        alphabet: k,
        rows: db.rows(),
        cols: n,
        counts,
    }
}

/// Result of the uniqueness gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uniqueness {
    Unique,
    /// Columns `first < second` (0-based) share a histogram; `second` is the
    /// smallest column index repeating an earlier histogram.
    Duplicate {
        first: usize,
        second: usize,
    },
}

pub fn check_uniqueness(h: &HistogramMatrix) -> Uniqueness {
    let mut seen: HashMap<&[u32], usize> = HashMap::with_capacity(h.cols());
    for (j, col) in h.columns().enumerate() {
        if let Some(&i) = seen.get(col) {
            return Uniqueness::Duplicate {
                first: i,
                second: j,
            };
        }
        seen.insert(col, j);
    }
    Uniqueness::Unique
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DetectionOutcome {
    Detected(DeletionPattern),
    /// The uniqueness gate failed on the unlabeled histograms.
    DetectionError {
        first: usize,
        second: usize,
    },
}

/// Estimates the deleted columns from the two histogram matrices.
///
/// Membership is exact count-vector equality. Fails with
/// [`Error::ModelViolation`] when the number of missing histograms differs
/// from `n - K`, which cannot happen for noiselessly deleted inputs.
pub fn detect_deletions(h1: &HistogramMatrix, h2: &HistogramMatrix) -> Result<DetectionOutcome> {
    if h2.cols() > h1.cols() {
        return Err(usage!(
            "labeled histograms have {} columns, more than the {} unlabeled ones",
            h2.cols(),
            h1.cols()
        ));
    }
    if h1.rows() != h2.rows() || h1.alphabet_size() != h2.alphabet_size() {
        return Err(usage!(
            "histograms built over different databases ({} vs {} rows, alphabet {} vs {})",
            h1.rows(),
            h2.rows(),
            h1.alphabet_size(),
            h2.alphabet_size()
        ));
    }
    if let Uniqueness::Duplicate { first, second } = check_uniqueness(h1) {
        return Ok(DetectionOutcome::DetectionError { first, second });
    }
    let present: HashSet<&[u32]> = h2.columns().collect();
    let deleted: Vec<usize> = h1
        .columns()
        .enumerate()
        .filter_map(|(j, col)| (!present.contains(col)).then_some(j))
        .collect();
    let expected = h1.cols() - h2.cols();
    if deleted.len() != expected {
        return Err(Error::ModelViolation(format!(
            "{} columns missing from the labeled histograms, expected n - K = {expected}",
            deleted.len()
        )));
    }
    Ok(DetectionOutcome::Detected(
        DeletionPattern::from_sorted_unchecked(h1.cols(), deleted),
    ))
}
