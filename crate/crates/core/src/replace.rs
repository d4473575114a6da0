//! Scanning for disguised missing-value codes and turning them into real
//! missing cells.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::table::{Cell, Column, DType, Table, Value};

/// Numeric codes commonly used to stand in for a missing value.
pub const COMMON_NA_NUMBERS: [i64; 9] = [-9, -98, -99, -999, -9999, 9999, 66, 77, 88];

/// Strings commonly used to stand in for a missing value.
pub const COMMON_NA_STRINGS: [&str; 13] =
    ["NA", "N/A", "#N/A", "N A", "na", "n/a", "n a", "NULL", "null", "missing", "MISSING", "Missing", ""];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Numeric,
    Text,
}

/// The frozen list of common missing-value codes of one kind.
pub fn common_na_tokens(kind: TokenKind) -> Vec<Value> {
    match kind {
        TokenKind::Numeric => COMMON_NA_NUMBERS.iter().map(|&v| Value::Integer(v)).collect(),
        TokenKind::Text => COMMON_NA_STRINGS.iter().map(|s| Value::Text(s.to_string())).collect(),
    }
}

/// Which columns a scoped verb applies to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scope {
    All,
    At(Vec<String>),
    /// Columns of a dtype. `Numeric` also matches integer columns.
    If(DType),
}

impl Scope {
    /// Column indices this scope selects, in table order for `All`/`If` and
    /// in the given order for `At`.
    pub fn resolve(&self, table: &Table) -> Result<Vec<usize>> {
        match self {
            Scope::All => Ok((0..table.n_cols()).collect()),
            Scope::At(names) => names.iter().map(|n| table.index_of(n)).collect(),
            Scope::If(dtype) => Ok(table
                .columns()
                .iter()
                .enumerate()
                .filter(|(_, c)| dtype_matches(*dtype, c.dtype()))
                .map(|(i, _)| i)
                .collect()),
        }
    }
}

fn dtype_matches(wanted: DType, actual: DType) -> bool {
    match wanted {
        DType::Numeric => actual.is_numeric(),
        other => other == actual,
    }
}

/// Whether `value` can ever equal a cell of a column of `dtype`.
pub fn compatible(dtype: DType, value: &Value) -> bool {
    match value {
        Value::Integer(_) | Value::Numeric(_) => dtype.is_numeric(),
        Value::Boolean(_) => dtype == DType::Boolean,
        Value::Text(_) => dtype == DType::Text,
    }
}

/// Exact equality; numbers compare as 64-bit reals.
fn cell_equals(cell: &Cell, value: &Value) -> bool {
    match (cell, value) {
        (Cell::Missing, _) => false,
        (Cell::Present(Value::Text(a)), Value::Text(b)) => a == b,
        (Cell::Present(Value::Boolean(a)), Value::Boolean(b)) => a == b,
        (Cell::Present(a), b) => match (a.as_f64(), b.as_f64()) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        },
    }
}

fn matching_rows(column: &Column, values: &[Value]) -> Vec<usize> {
    (0..column.len())
        .filter(|&r| {
            let cell = column.cell(r);
            values.iter().any(|v| cell_equals(&cell, v))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub variable: String,
    pub value: String,
    pub n: usize,
}

/// Occurrences of each searched value in each variable, zero counts included.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
}

impl ScanReport {
    pub fn total(&self) -> usize {
        self.rows.iter().map(|r| r.n).sum()
    }
}

/// Count present cells equal to each value, for every column × value.
pub fn miss_scan_count(table: &Table, values: &[Value]) -> Result<ScanReport> {
    if values.is_empty() {
        return Err(Error::Validation("no values to scan for".into()));
    }
    let mut rows = Vec::with_capacity(table.n_cols() * values.len());
    for col in table.columns() {
        for v in values {
            rows.push(ScanRow {
                variable: col.name().to_string(),
                value: v.to_string(),
                n: matching_rows(col, std::slice::from_ref(v)).len(),
            });
        }
    }
    Ok(ScanReport { rows })
}

/// Per-column lists of payloads to turn into missing cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReplaceSpec {
    pub entries: Vec<(String, Vec<Value>)>,
}

impl ReplaceSpec {
    pub fn new() -> Self {
        ReplaceSpec::default()
    }

    pub fn with(mut self, column: impl Into<String>, values: Vec<Value>) -> Self {
        self.entries.push((column.into(), values));
        self
    }
}

fn replace_in(table: &Table, targets: &[(usize, Vec<Value>)]) -> Result<Table> {
    let mut out = table.clone();
    for (idx, values) in targets {
        let col = &out.columns()[*idx];
        let rows = matching_rows(col, values);
        if !rows.is_empty() {
            let replaced = col.with_missing(rows);
            out = out.with_replaced(*idx, replaced)?;
        }
    }
    Ok(out)
}

/// Replace the listed payloads with missing cells.
///
/// Values must be dtype-compatible with their column. On nabular input the
/// shadow is updated for the new missing cells.
pub fn replace_with_na<F: Frame>(target: &F, spec: &ReplaceSpec) -> Result<F> {
    let table = target.data();
    let mut targets = Vec::with_capacity(spec.entries.len());
    for (name, values) in &spec.entries {
        let idx = table.index_of(name)?;
        let dtype = table.columns()[idx].dtype();
        if let Some(bad) = values.iter().find(|v| !compatible(dtype, v)) {
            return Err(Error::Type(format!("value `{bad}` cannot occur in {dtype} column `{name}`")));
        }
        targets.push((idx, values.clone()));
    }
    target.with_data_synced(replace_in(table, &targets)?)
}

/// Scoped replacement; values incompatible with a column's dtype are
/// skipped for that column.
pub fn replace_with_na_scoped<F: Frame>(target: &F, scope: &Scope, values: &[Value]) -> Result<F> {
    let table = target.data();
    let targets: Vec<(usize, Vec<Value>)> = scope
        .resolve(table)?
        .into_iter()
        .map(|idx| {
            let dtype = table.columns()[idx].dtype();
            let vals = values.iter().filter(|v| compatible(dtype, v)).cloned().collect();
            (idx, vals)
        })
        .collect();
    target.with_data_synced(replace_in(table, &targets)?)
}

/// Replacement spec selecting exactly the cells a scoped call would touch.
pub fn scoped_spec(table: &Table, scope: &Scope, values: &[Value]) -> Result<ReplaceSpec> {
    let mut spec = ReplaceSpec::new();
    for idx in scope.resolve(table)? {
        let col = &table.columns()[idx];
        let vals = values.iter().filter(|v| compatible(col.dtype(), v)).cloned().collect();
        spec = spec.with(col.name(), vals);
    }
    Ok(spec)
}
