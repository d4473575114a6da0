//! Numerical missingness summaries: single numbers, per-variable and
//! per-case summaries, tabulations, runs and spans.
//!
//! Everything here counts *data* missingness. Special shadow levels placed on
//! present cells are reported separately by [`shadow_counts`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::shadow::NabularTable;
use crate::table::{GroupedTable, Table};

/// Round half away from zero to `places` decimals.
pub fn round_half_away(x: f64, places: i32) -> f64 {
    let scale = 10f64.powi(places);
    let scaled = x * scale;
    // snap values a few ulps off a representable half before rounding
    let snapped = (scaled * 1e9).round() / 1e9;
    snapped.round() / scale
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MissingCounts {
    pub n_miss: usize,
    pub n_complete: usize,
}

/// Cellwise missing / complete counts of a whole table.
pub fn count_missing(table: &Table) -> MissingCounts {
    let n_miss = table.n_missing();
    MissingCounts { n_miss, n_complete: table.n_rows() * table.n_cols() - n_miss }
}

/// Cellwise counts of a single column.
pub fn count_missing_column(column: &crate::table::Column) -> MissingCounts {
    let n_miss = column.n_missing();
    MissingCounts { n_miss, n_complete: column.len() - n_miss }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Cell,
    Case,
    Var,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateForm {
    Proportion,
    Percent,
}

/// Share of missing cells, of cases with any missing, or of variables with
/// any missing. `complement` gives the complete share instead.
pub fn rate_missing(table: &Table, unit: Unit, form: RateForm, complement: bool) -> Result<f64> {
    if table.n_rows() == 0 || table.n_cols() == 0 {
        return Err(Error::EmptyDomain("missingness rates need at least one row and one column".into()));
    }
    let (hits, total) = match unit {
        Unit::Cell => (table.n_missing(), table.n_rows() * table.n_cols()),
        Unit::Case => (table.missing_rows().iter().filter(|r| r.iter().any(|&m| m)).count(), table.n_rows()),
        Unit::Var => (table.columns().iter().filter(|c| c.n_missing() > 0).count(), table.n_cols()),
    };
    let share = if complement { (total - hits) as f64 / total as f64 } else { hits as f64 / total as f64 };
    Ok(match form {
        RateForm::Proportion => share,
        RateForm::Percent => 100.0 * share,
    })
}

/// All single-number summaries at full precision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleNumbers {
    pub n_miss: usize,
    pub n_complete: usize,
    pub prop_miss: f64,
    pub prop_complete: f64,
    pub pct_miss: f64,
    pub pct_complete: f64,
    pub pct_miss_case: f64,
    pub pct_complete_case: f64,
    pub pct_miss_var: f64,
    pub pct_complete_var: f64,
}

pub fn single_numbers(table: &Table) -> Result<SingleNumbers> {
    let counts = count_missing(table);
    let rate = |unit, form, complement| rate_missing(table, unit, form, complement);
    Ok(SingleNumbers {
        n_miss: counts.n_miss,
        n_complete: counts.n_complete,
        prop_miss: rate(Unit::Cell, RateForm::Proportion, false)?,
        prop_complete: rate(Unit::Cell, RateForm::Proportion, true)?,
        pct_miss: rate(Unit::Cell, RateForm::Percent, false)?,
        pct_complete: rate(Unit::Cell, RateForm::Percent, true)?,
        pct_miss_case: rate(Unit::Case, RateForm::Percent, false)?,
        pct_complete_case: rate(Unit::Case, RateForm::Percent, true)?,
        pct_miss_var: rate(Unit::Var, RateForm::Percent, false)?,
        pct_complete_var: rate(Unit::Var, RateForm::Percent, true)?,
    })
}

/// One key column's value for a grouped summary row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupKey {
    pub column: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarSummaryRow {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub group: Vec<GroupKey>,
    pub variable: String,
    pub n_miss: usize,
    pub pct_miss: f64,
}

fn pct(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

fn var_rows(table: &Table, rows: &[usize], skip: &[String], group: &[GroupKey]) -> Vec<VarSummaryRow> {
    let mut out: Vec<VarSummaryRow> = table
        .columns()
        .iter()
        .filter(|c| !skip.iter().any(|k| k == c.name()))
        .map(|c| {
            let n_miss = rows.iter().filter(|&&r| c.is_missing(r)).count();
            VarSummaryRow {
                group: group.to_vec(),
                variable: c.name().to_string(),
                n_miss,
                pct_miss: pct(n_miss, rows.len()),
            }
        })
        .collect();
    out.sort_by_key(|r| std::cmp::Reverse(r.n_miss));
    out
}

/// Missing count and percent per variable, most-missing first.
pub fn miss_var_summary(table: &Table) -> Vec<VarSummaryRow> {
    let rows: Vec<usize> = (0..table.n_rows()).collect();
    var_rows(table, &rows, &[], &[])
}

fn group_keys(grouped: &GroupedTable, key: &[String]) -> Vec<GroupKey> {
    grouped.keys().iter().zip(key).map(|(c, v)| GroupKey { column: c.clone(), value: v.clone() }).collect()
}

/// Per-group variable summaries; key columns are not summarized.
pub fn miss_var_summary_grouped(grouped: &GroupedTable, na: &str) -> Vec<VarSummaryRow> {
    grouped
        .groups()
        .iter()
        .flat_map(|g| {
            let keys = group_keys(grouped, &g.key_labels(na));
            var_rows(grouped.base(), &g.rows, grouped.keys(), &keys)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseSummaryRow {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub group: Vec<GroupKey>,
    /// 1-based row number in the source table.
    pub case: usize,
    pub n_miss: usize,
    pub pct_miss: f64,
}

fn case_rows(table: &Table, rows: &[usize], skip: &[String], group: &[GroupKey]) -> Vec<CaseSummaryRow> {
    let cols: Vec<_> = table.columns().iter().filter(|c| !skip.iter().any(|k| k == c.name())).collect();
    let mut out: Vec<CaseSummaryRow> = rows
        .iter()
        .map(|&r| {
            let n_miss = cols.iter().filter(|c| c.is_missing(r)).count();
            CaseSummaryRow { group: group.to_vec(), case: r + 1, n_miss, pct_miss: pct(n_miss, cols.len()) }
        })
        .collect();
    out.sort_by_key(|r| std::cmp::Reverse(r.n_miss));
    out
}

/// Missing count and percent per case, most-missing first.
pub fn miss_case_summary(table: &Table) -> Vec<CaseSummaryRow> {
    let rows: Vec<usize> = (0..table.n_rows()).collect();
    case_rows(table, &rows, &[], &[])
}

/// Per-group case summaries over the non-key variables.
pub fn miss_case_summary_grouped(grouped: &GroupedTable, na: &str) -> Vec<CaseSummaryRow> {
    grouped
        .groups()
        .iter()
        .flat_map(|g| {
            let keys = group_keys(grouped, &g.key_labels(na));
            case_rows(grouped.base(), &g.rows, grouped.keys(), &keys)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TabulationRow {
    pub n_miss_in_unit: usize,
    pub n_units: usize,
    pub pct_units: f64,
}

fn tabulate(per_unit: impl IntoIterator<Item = usize>) -> Vec<TabulationRow> {
    let mut freq = std::collections::BTreeMap::new();
    let mut total = 0;
    for n in per_unit {
        *freq.entry(n).or_insert(0usize) += 1;
        total += 1;
    }
    freq.into_iter()
        .map(|(n_miss_in_unit, n_units)| TabulationRow { n_miss_in_unit, n_units, pct_units: pct(n_units, total) })
        .collect()
}

/// How many variables have 0, 1, 2, … missing values.
pub fn miss_var_table(table: &Table) -> Vec<TabulationRow> {
    tabulate(table.columns().iter().map(|c| c.n_missing()))
}

/// How many cases have 0, 1, 2, … missing values.
pub fn miss_case_table(table: &Table) -> Vec<TabulationRow> {
    tabulate(table.missing_rows().into_iter().map(|r| r.into_iter().filter(|&m| m).count()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRow {
    pub run_length: usize,
    pub is_missing: bool,
}

/// Maximal runs of missing / complete cells in row order.
pub fn miss_var_run(table: &Table, var: &str) -> Result<Vec<RunRow>> {
    let col = table.column(var)?;
    if col.is_empty() {
        return Err(Error::EmptyDomain(format!("column `{var}` has no rows")));
    }
    let mut runs: Vec<RunRow> = Vec::new();
    for missing in col.missing_mask() {
        match runs.last_mut() {
            Some(run) if run.is_missing == missing => run.run_length += 1,
            _ => runs.push(RunRow { run_length: 1, is_missing: missing }),
        }
    }
    Ok(runs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanRow {
    /// 1-based block number.
    pub span_counter: usize,
    pub n_miss: usize,
    pub n_complete: usize,
    /// Rows in this block; the last block may be short.
    pub span_size: usize,
}

/// Missing / complete counts over consecutive blocks of `span_size` rows.
pub fn miss_var_span(table: &Table, var: &str, span_size: usize) -> Result<Vec<SpanRow>> {
    let col = table.column(var)?;
    if span_size == 0 {
        return Err(Error::Validation("span size must be at least 1".into()));
    }
    Ok(col
        .missing_mask()
        .chunks(span_size)
        .enumerate()
        .map(|(i, block)| {
            let n_miss = block.iter().filter(|&&m| m).count();
            SpanRow { span_counter: i + 1, n_miss, n_complete: block.len() - n_miss, span_size: block.len() }
        })
        .collect())
}

/// Data-missing vs shadow-missing counts per variable of a nabular table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowCountRow {
    pub variable: String,
    pub n_data_miss: usize,
    pub n_shadow_miss: usize,
}

pub fn shadow_counts(nab: &NabularTable) -> Vec<ShadowCountRow> {
    nab.data()
        .columns()
        .iter()
        .zip(nab.shadow().columns())
        .map(|(c, s)| ShadowCountRow {
            variable: c.name().to_string(),
            n_data_miss: c.n_missing(),
            n_shadow_miss: (0..c.len()).filter(|&r| s.is_missing(r)).count(),
        })
        .collect()
}
