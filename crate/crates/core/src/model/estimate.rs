/// Verdict for one row of the labeled database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowAssignment {
    /// Matched to this (0-based) row of the unlabeled database.
    Matched(usize),
    /// Zero or several candidate rows. Zero cannot happen for inputs produced
    /// by the deletion model with the true pattern, so both share one flag.
    CollisionError,
    /// Column histograms of the unlabeled database were not unique.
    DetectionError,
}

/// Estimated labeling, one assignment per labeled row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchEstimate {
    assignment: Vec<RowAssignment>,
}

impl MatchEstimate {
    pub fn new(assignment: Vec<RowAssignment>) -> Self {
        Self { assignment }
    }

    pub fn detection_error(rows: usize) -> Self {
        Self {
            assignment: vec![RowAssignment::DetectionError; rows],
        }
    }

    pub fn assignment(&self) -> &[RowAssignment] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn is_detection_error(&self) -> bool {
        self.assignment
            .first()
            .is_some_and(|a| *a == RowAssignment::DetectionError)
    }

    pub fn collided_rows(&self) -> usize {
        self.assignment
            .iter()
            .filter(|a| **a == RowAssignment::CollisionError)
            .count()
    }
}
