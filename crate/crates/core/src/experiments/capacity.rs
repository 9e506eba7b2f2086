use crate::model::AlphabetDistribution;
use crate::probability::{capacity_point, collision_param, CapacityPoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityRow {
    pub point: CapacityPoint,
    pub qhat: f64,
    /// `1 - qhat`, the budget from which the adversarial capacity is zero.
    pub threshold: f64,
    pub at_or_beyond_threshold: bool,
}

/// Adversarial and random capacities at each budget in `deltas`.
///
/// # Panics
/// If a budget is outside `[0, 1]`.
pub fn capacity_curve(dist: &AlphabetDistribution, deltas: &[f64]) -> Vec<CapacityRow> {
    let qhat = collision_param(dist);
    let threshold = 1.0 - qhat;
    deltas
        .iter()
        .map(|&delta| CapacityRow {
            point: capacity_point(dist, delta),
            qhat,
            threshold,
            at_or_beyond_threshold: delta >= threshold,
        })
        .collect()
}
