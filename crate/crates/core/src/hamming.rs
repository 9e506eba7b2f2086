//! Hamming distance between symbol rows.

use crate::error::{usage, Result};
use crate::model::Symbol;

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &[Symbol], b: &[Symbol]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(usage!(
            "rows of length {} and {} have no Hamming distance",
            a.len(),
            b.len()
        ));
    }
    Ok(hamming_unchecked(a, b))
}

#[inline]
pub(crate) fn hamming_unchecked(a: &[Symbol], b: &[Symbol]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| usize::from(x != y)).sum()
}

/// Longest row [`pack_row`] accepts.
pub(crate) const PACK_MAX_COLS: usize = 32;
/// Largest alphabet [`pack_row`] accepts.
pub(crate) const PACK_MAX_ALPHABET: usize = 16;

const LOW_NIBBLES: u128 = u128::MAX / 0xf;

/// Four bits per symbol, column `j` in bits `4j..4j+4`.
#[inline]
pub(crate) fn pack_row(row: &[Symbol]) -> u128 {
    debug_assert!(row.len() <= PACK_MAX_COLS);
    row.iter()
        .rev()
        .fold(0u128, |acc, &x| (acc << 4) | u128::from(x - 1))
}

/// Hamming distance of two packed rows: count the nonzero nibbles of the XOR.
#[inline]
pub(crate) fn packed_distance(a: u128, b: u128) -> usize {
    let x = a ^ b;
    ((x | x >> 1 | x >> 2 | x >> 3) & LOW_NIBBLES).count_ones() as usize
}

/// Indices (0-based, increasing) where `a` and `b` differ.
pub(crate) fn differing_columns(a: &[Symbol], b: &[Symbol]) -> Vec<usize> {
    a.iter()
        .zip(b)
        .enumerate()
        .filter_map(|(j, (x, y))| (x != y).then_some(j))
        .collect()
}
