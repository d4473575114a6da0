//! Per-row missingness columns appended to a table.

mod cluster;

pub use cluster::{Dendrogram, Merge};

use crate::error::{Error, Result};
use crate::shadow::NabularTable;
use crate::table::{Column, Table};

pub const N_MISS_COLUMN: &str = "n_miss_all";
pub const PROP_MISS_COLUMN: &str = "prop_miss_all";
pub const ANY_MISS_COLUMN: &str = "any_miss_all";
pub const CLUSTER_COLUMN: &str = "miss_cluster_all";
pub const LABEL_COLUMN: &str = "any_missing";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    N,
    Proportion,
    Any,
}

/// Per-row count, share or any-missing label as a standalone column.
pub fn miss_count_column(table: &Table, mode: CountMode) -> Column {
    let per_row: Vec<usize> = table.missing_rows().iter().map(|r| r.iter().filter(|&&m| m).count()).collect();
    let n_vars = table.n_cols();
    match mode {
        CountMode::N => Column::integer(N_MISS_COLUMN, per_row.iter().map(|&n| Some(n as i64)).collect()),
        CountMode::Proportion => Column::numeric(
            PROP_MISS_COLUMN,
            per_row.iter().map(|&n| Some(if n_vars == 0 { 0.0 } else { n as f64 / n_vars as f64 })).collect(),
        ),
        CountMode::Any => Column::text(
            ANY_MISS_COLUMN,
            per_row.iter().map(|&n| Some(if n > 0 { "missing" } else { "complete" })).collect(),
        ),
    }
}

/// Append `n_miss_all`, `prop_miss_all` or `any_miss_all`.
pub fn add_miss_counts(table: &Table, mode: CountMode) -> Result<Table> {
    table.with_column(miss_count_column(table, mode))
}

/// Row labels `Missing` / `Not Missing` from the shadow, as a column.
pub fn label_shadow_column(nab: &NabularTable) -> Column {
    Column::text(
        LABEL_COLUMN,
        nab.any_missing_rows().into_iter().map(|m| Some(if m { "Missing" } else { "Not Missing" })).collect(),
    )
}

/// Append `any_missing`: "Missing" when any shadow cell in the row is not
/// `!NA`, else "Not Missing".
pub fn add_label_shadow(nab: &NabularTable) -> Result<NabularTable> {
    nab.with_annotation(label_shadow_column(nab))
}

/// Clustering parameters. Distance is Hamming over missingness flags and
/// linkage is complete; only the cluster count is tunable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterParams {
    pub k: usize,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams { k: 2 }
    }
}

/// Cluster labels `1..=k` for the rows of `table`.
pub fn miss_cluster_labels(table: &Table, params: ClusterParams) -> Result<Vec<usize>> {
    if params.k == 0 || params.k > table.n_rows() {
        return Err(Error::Validation(format!(
            "cluster count {} must be between 1 and the row count {}",
            params.k,
            table.n_rows()
        )));
    }
    Ok(Dendrogram::build(&table.missing_rows()).cut(params.k))
}

/// Append `miss_cluster_all`. The algorithm is deterministic; `seed` is
/// accepted for interface stability and does not affect the result.
pub fn add_miss_cluster(table: &Table, params: ClusterParams, _seed: u64) -> Result<Table> {
    let labels = miss_cluster_labels(table, params)?;
    table.with_column(Column::integer(CLUSTER_COLUMN, labels.into_iter().map(|l| Some(l as i64)).collect()))
}
