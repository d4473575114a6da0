use serde::Serialize;

use crate::error::{Error, Result};

use super::Column;

/// Location and range of the observed values of one column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatsRow {
    pub min: f64,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub n_observed: usize,
}

impl StatsRow {
    /// Statistics of a slice of observed values; `None` when empty.
    pub fn from_values(values: &[f64]) -> Option<StatsRow> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Some(StatsRow {
            min: sorted[0],
            mean: values.iter().sum::<f64>() / values.len() as f64,
            median: median_of_sorted(&sorted),
            max: sorted[sorted.len() - 1],
            n_observed: values.len(),
        })
    }
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Median with the even-count midpoint convention; `None` when empty.
pub fn median_of(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Some(median_of_sorted(&sorted))
}

/// min / mean / median / max over the present cells of a numeric column.
pub fn observed_stats(column: &Column) -> Result<StatsRow> {
    let values: Vec<f64> = column.require_f64()?.into_iter().flatten().collect();
    StatsRow::from_values(&values)
        .ok_or_else(|| Error::EmptyDomain(format!("column `{}` has no observed values", column.name())))
}
