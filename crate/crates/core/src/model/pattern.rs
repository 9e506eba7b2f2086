use std::fmt;

use super::Symbol;
use crate::error::{usage, Result};

/// Set of deleted column indices (0-based, strictly increasing) out of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeletionPattern {
    indices: Vec<usize>,
    n: usize,
}

impl DeletionPattern {
    /// Indices may arrive in any order; duplicates and out-of-range entries are rejected.
    pub fn new(n: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(usage!("column {} deleted twice", w[0] + 1));
        }
        if let Some(&j) = indices.last() {
            if j >= n {
                return Err(usage!("column {} outside 1..={n}", j + 1));
            }
        }
        Ok(Self { indices, n })
    }

    /// Same as [`DeletionPattern::new`] with 1-based indices.
    pub fn from_one_based(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(usage!("column index 0 in a 1-based pattern"));
        }
        Self::new(n, indices.iter().map(|j| j - 1).collect())
    }

    pub fn empty(n: usize) -> Self {
        Self {
            indices: Vec::new(),
            n,
        }
    }

    pub fn full(n: usize) -> Self {
        Self {
            indices: (0..n).collect(),
            n,
        }
    }

    pub(crate) fn from_sorted_unchecked(n: usize, indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.last().is_none_or(|&j| j < n));
        Self { indices, n }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|j| j + 1).collect()
    }

    /// Number of source columns.
    pub fn source_cols(&self) -> usize {
        self.n
    }

    /// `d`, the number of deleted columns.
    pub fn deleted(&self) -> usize {
        self.indices.len()
    }

    pub fn retained_cols(&self) -> usize {
        self.n - self.indices.len()
    }

    /// Effective budget `d / n`.
    pub fn budget(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.indices.len() as f64 / self.n as f64
        }
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// Retained column indices in increasing order.
    pub fn retained(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.retained_cols());
        let mut del = self.indices.iter().peekable();
        for j in 0..self.n {
            if del.peek() == Some(&&j) {
                del.next();
            } else {
                out.push(j);
            }
        }
        out
    }
}

impl fmt::Display for DeletionPattern {
    /// 1-based, e.g. `{2,5}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, j) in self.indices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        f.write_str("}")
    }
}

/// Entries of `row` at the retained positions of `pattern`, in original order.
pub fn apply_pattern_complement(row: &[Symbol], pattern: &DeletionPattern) -> Result<Vec<Symbol>> {
    if row.len() != pattern.source_cols() {
        return Err(usage!(
            "row has {} entries but the pattern is over {} columns",
            row.len(),
            pattern.source_cols()
        ));
    }
    Ok(pattern.retained().into_iter().map(|j| row[j]).collect())
}
