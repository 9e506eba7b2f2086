//! Row matching after deletion detection, and scoring against the truth.

use std::collections::HashMap;

use crate::detection::{column_histograms, detect_deletions, DetectionOutcome};
use crate::error::{usage, Result};
use crate::model::{
    DeletionPattern, LabeledDatabase, LabelingPermutation, MatchEstimate, RowAssignment, Symbol,
    SymbolMatrix, UnlabeledDatabase,
};

/// `db` with the columns in `pattern` discarded; row and column order kept.
pub fn project_retained(db: &UnlabeledDatabase, pattern: &DeletionPattern) -> Result<SymbolMatrix> {
    if pattern.source_cols() != db.cols() {
        return Err(usage!(
            "pattern over {} columns for a {}-column database",
            pattern.source_cols(),
            db.cols()
        ));
    }
    let retained = pattern.retained();
    let mut data = Vec::with_capacity(db.rows() * retained.len());
    for row in db.row_iter() {
        data.extend(retained.iter().map(|&j| row[j]));
    }
    Ok(SymbolMatrix::from_parts_unchecked(
        db.rows(),
        retained.len(),
        db.alphabet_size(),
        data,
    ))
}

fn check_shapes(d1: &SymbolMatrix, d2: &SymbolMatrix) -> Result<()> {
    if d1.rows() != d2.rows() || d1.cols() != d2.cols() {
        return Err(usage!(
            "cannot match a {}x{} database against a {}x{} one",
            d2.rows(),
            d2.cols(),
            d1.rows(),
            d1.cols()
        ));
    }
    Ok(())
}

/// Assigns each labeled row to the unique projected row with identical
/// content; zero or several candidates give a collision error.
pub fn exact_match(d1_reduced: &SymbolMatrix, d2: &LabeledDatabase) -> Result<MatchEstimate> {
    check_shapes(d1_reduced, d2)?;
    // content -> (first row, multiplicity)
    let mut index: HashMap<&[Symbol], (usize, u32)> = HashMap::with_capacity(d1_reduced.rows());
    for (i, row) in d1_reduced.row_iter().enumerate() {
        index.entry(row).and_modify(|e| e.1 += 1).or_insert((i, 1));
    }
    let assignment = d2
        .row_iter()
        .map(|row| match index.get(row) {
            Some(&(i, 1)) => RowAssignment::Matched(i),
            _ => RowAssignment::CollisionError,
        })
        .collect();
    Ok(MatchEstimate::new(assignment))
}

/// Quadratic reference for [`exact_match`].
pub fn exact_match_naive(d1_reduced: &SymbolMatrix, d2: &LabeledDatabase) -> Result<MatchEstimate> {
    check_shapes(d1_reduced, d2)?;
    let assignment = d2
        .row_iter()
        .map(|row| {
            let mut hits = d1_reduced
                .row_iter()
                .enumerate()
                .filter(|(_, r)| *r == row)
                .map(|(i, _)| i);
            match (hits.next(), hits.next()) {
                (Some(i), None) => RowAssignment::Matched(i),
                _ => RowAssignment::CollisionError,
            }
        })
        .collect();
    Ok(MatchEstimate::new(assignment))
}

/// Full scheme: histograms, uniqueness gate, deletion detection, projection
/// and exact row matching. A failed gate flags every row as a detection error.
pub fn match_pipeline(d1: &UnlabeledDatabase, d2: &LabeledDatabase) -> Result<MatchEstimate> {
    if d1.rows() != d2.rows() {
        return Err(usage!(
            "databases have {} and {} rows",
            d1.rows(),
            d2.rows()
        ));
    }
    if d1.rows() == 1 {
        // only one labeling exists, so there is nothing to detect or confuse
        return Ok(MatchEstimate::new(vec![RowAssignment::Matched(0)]));
    }
    let h1 = column_histograms(d1);
    let h2 = column_histograms(d2);
    match detect_deletions(&h1, &h2)? {
        DetectionOutcome::DetectionError { .. } => Ok(MatchEstimate::detection_error(d1.rows())),
        DetectionOutcome::Detected(pattern) => exact_match(&project_retained(d1, &pattern)?, d2),
    }
}

/// Fraction of labeled rows not matched to their true source row.
pub fn score(est: &MatchEstimate, truth: &LabelingPermutation) -> Result<f64> {
    if est.len() != truth.len() {
        return Err(usage!(
            "estimate over {} rows, labeling over {}",
            est.len(),
            truth.len()
        ));
    }
    if est.is_empty() {
        return Ok(0.0);
    }
    let wrong = est
        .assignment()
        .iter()
        .enumerate()
        .filter(|&(l, a)| *a != RowAssignment::Matched(truth.apply_inverse(l)))
        .count();
    Ok(wrong as f64 / est.len() as f64)
}
