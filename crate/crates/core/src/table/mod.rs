//! NA-aware columnar tables.
//!
//! Missingness is a cell state (`None` in the typed column vectors), never a
//! sentinel payload, so every dtype carries missing cells the same way.

mod group;
mod io;
mod stats;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use group::{group_by, Group, GroupedTable, KeyAtom};
pub(crate) use io::type_column as io_type_column;
pub use io::{read_delimited, read_raw, table_from_raw, write_delimited, NaTokenConfig, RawTable};
pub use stats::{median_of, observed_stats, StatsRow};

/// Column element type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DType {
    Integer,
    Numeric,
    Boolean,
    Text,
}

impl DType {
    /// Integer and numeric columns both hold real-valued data.
    pub fn is_numeric(self) -> bool {
        matches!(self, DType::Integer | DType::Numeric)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DType::Integer => "integer",
            DType::Numeric => "numeric",
            DType::Boolean => "boolean",
            DType::Text => "text",
        }
    }
}

impl fmt::Display for DType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integer" => Ok(DType::Integer),
            "numeric" => Ok(DType::Numeric),
            "boolean" => Ok(DType::Boolean),
            "text" => Ok(DType::Text),
            other => Err(Error::Validation(format!("unknown dtype `{other}`"))),
        }
    }
}

/// A present payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Integer(i64),
    Numeric(f64),
    Boolean(bool),
    Text(String),
}

impl Value {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Integer(v) => Some(*v as f64),
            Value::Numeric(v) => Some(*v),
            _ => None,
        }
    }

    /// Parse a literal the way a command-line argument would be read: numbers
    /// first, then booleans, otherwise text.
    pub fn parse_literal(s: &str) -> Value {
        let t = s.trim();
        if let Ok(i) = t.parse::<i64>() {
            Value::Integer(i)
        } else if let Some(f) = io::parse_finite(t) {
            Value::Numeric(f)
        } else if let Some(b) = io::parse_bool(t) {
            Value::Boolean(b)
        } else {
            Value::Text(s.to_string())
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Integer(v) => write!(f, "{v}"),
            Value::Numeric(v) => f.write_str(&format_f64(*v)),
            Value::Boolean(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
        }
    }
}

/// One cell: either a present payload or missing.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Present(Value),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

/// Typed cell storage.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Integer(Vec<Option<i64>>),
    Numeric(Vec<Option<f64>>),
    Boolean(Vec<Option<bool>>),
    Text(Vec<Option<String>>),
}

macro_rules! each_data {
    ($data:expr, $v:ident => $body:expr) => {
        match $data {
            ColumnData::Integer($v) => $body,
            ColumnData::Numeric($v) => $body,
            ColumnData::Boolean($v) => $body,
            ColumnData::Text($v) => $body,
        }
    };
}

impl ColumnData {
    pub fn len(&self) -> usize {
        each_data!(self, v => v.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dtype(&self) -> DType {
        match self {
            ColumnData::Integer(_) => DType::Integer,
            ColumnData::Numeric(_) => DType::Numeric,
            ColumnData::Boolean(_) => DType::Boolean,
            ColumnData::Text(_) => DType::Text,
        }
    }
}

/// A named, typed column.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    name: String,
    data: ColumnData,
}

impl Column {
    pub fn new(name: impl Into<String>, data: ColumnData) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Schema("column names must be non-empty".into()));
        }
        Ok(Column { name, data })
    }

    pub fn integer(name: impl Into<String>, cells: Vec<Option<i64>>) -> Self {
        Self::new(name, ColumnData::Integer(cells)).expect("non-empty column name")
    }

    pub fn numeric(name: impl Into<String>, cells: Vec<Option<f64>>) -> Self {
        Self::new(name, ColumnData::Numeric(cells)).expect("non-empty column name")
    }

    pub fn boolean(name: impl Into<String>, cells: Vec<Option<bool>>) -> Self {
        Self::new(name, ColumnData::Boolean(cells)).expect("non-empty column name")
    }

    pub fn text<S: Into<String>>(name: impl Into<String>, cells: Vec<Option<S>>) -> Self {
        let cells = cells.into_iter().map(|c| c.map(Into::into)).collect();
        Self::new(name, ColumnData::Text(cells)).expect("non-empty column name")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn data(&self) -> &ColumnData {
        &self.data
    }

    pub fn dtype(&self) -> DType {
        self.data.dtype()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn renamed(&self, name: impl Into<String>) -> Result<Self> {
        Column::new(name, self.data.clone())
    }

    pub fn is_missing(&self, row: usize) -> bool {
        each_data!(&self.data, v => v[row].is_none())
    }

    /// Per-row missingness flags.
    pub fn missing_mask(&self) -> Vec<bool> {
        each_data!(&self.data, v => v.iter().map(Option::is_none).collect())
    }

    pub fn n_missing(&self) -> usize {
        each_data!(&self.data, v => v.iter().filter(|c| c.is_none()).count())
    }

    pub fn cell(&self, row: usize) -> Cell {
        let value = match &self.data {
            ColumnData::Integer(v) => v[row].map(Value::Integer),
            ColumnData::Numeric(v) => v[row].map(Value::Numeric),
            ColumnData::Boolean(v) => v[row].map(Value::Boolean),
            ColumnData::Text(v) => v[row].clone().map(Value::Text),
        };
        value.map_or(Cell::Missing, Cell::Present)
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.len()).map(|i| self.cell(i))
    }

    /// Real-valued view of an integer or numeric column.
    pub fn as_f64(&self) -> Option<Vec<Option<f64>>> {
        match &self.data {
            ColumnData::Integer(v) => Some(v.iter().map(|c| c.map(|x| x as f64)).collect()),
            ColumnData::Numeric(v) => Some(v.clone()),
            _ => None,
        }
    }

    /// Like [`Column::as_f64`] but with a type error naming the column.
    pub fn require_f64(&self) -> Result<Vec<Option<f64>>> {
        self.as_f64()
            .ok_or_else(|| Error::Type(format!("column `{}` is {}, expected numeric", self.name, self.dtype())))
    }

    /// Keep only the given rows, in the given order.
    pub fn take(&self, rows: &[usize]) -> Column {
        let data = match &self.data {
            ColumnData::Integer(v) => ColumnData::Integer(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Numeric(v) => ColumnData::Numeric(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Boolean(v) => ColumnData::Boolean(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Text(v) => ColumnData::Text(rows.iter().map(|&r| v[r].clone()).collect()),
        };
        Column { name: self.name.clone(), data }
    }

    /// Set the given rows to missing.
    pub fn with_missing(&self, rows: impl IntoIterator<Item = usize>) -> Column {
        let mut data = self.data.clone();
        for r in rows {
            each_data!(&mut data, v => v[r] = None);
        }
        Column { name: self.name.clone(), data }
    }

    /// Render a cell for delimited output; missing cells use `na`.
    pub fn render(&self, row: usize, na: &str) -> String {
        match self.cell(row) {
            Cell::Missing => na.to_string(),
            Cell::Present(v) => v.to_string(),
        }
    }
}

/// Format a float so that it re-parses as a float (never as an integer).
pub fn format_f64(v: f64) -> String {
    let s = v.to_string();
    if !v.is_finite() || s.contains('.') || s.contains('e') {
        s
    } else {
        format!("{s}.0")
    }
}

/// An ordered set of equal-length, uniquely named columns.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    columns: Vec<Column>,
    n_rows: usize,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        let n_rows = columns.first().map_or(0, Column::len);
        Self::with_rows(columns, n_rows)
    }

    /// Construct with an explicit row count (needed for zero-column tables).
    pub fn with_rows(columns: Vec<Column>, n_rows: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.name()) {
                return Err(Error::Schema(format!("duplicate column name `{}`", c.name())));
            }
            if c.len() != n_rows {
                return Err(Error::Schema(format!("column `{}` has {} cells, expected {n_rows}", c.name(), c.len())));
            }
        }
        Ok(Table { columns, n_rows })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn names(&self) -> Vec<&str> {
        self.columns.iter().map(Column::name).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.columns.iter().position(|c| c.name() == name).ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&Column> {
        self.index_of(name).map(|i| &self.columns[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.columns.iter().any(|c| c.name() == name)
    }

    /// Append a column; the name must be new.
    pub fn with_column(&self, column: Column) -> Result<Table> {
        if self.contains(column.name()) {
            return Err(Error::NameCollision(column.name().to_string()));
        }
        let mut columns = self.columns.clone();
        columns.push(column);
        Table::with_rows(columns, self.n_rows)
    }

    /// Replace the column at `index`, keeping its position.
    pub fn with_replaced(&self, index: usize, column: Column) -> Result<Table> {
        let mut columns = self.columns.clone();
        columns[index] = column;
        Table::with_rows(columns, self.n_rows)
    }

    pub fn take_rows(&self, rows: &[usize]) -> Table {
        Table { columns: self.columns.iter().map(|c| c.take(rows)).collect(), n_rows: rows.len() }
    }

    pub fn into_columns(self) -> Vec<Column> {
        self.columns
    }

    /// Row-major missingness flags.
    pub fn missing_rows(&self) -> Vec<Vec<bool>> {
        let masks: Vec<Vec<bool>> = self.columns.iter().map(Column::missing_mask).collect();
        (0..self.n_rows).map(|r| masks.iter().map(|m| m[r]).collect()).collect()
    }

    pub fn n_missing(&self) -> usize {
        self.columns.iter().map(Column::n_missing).sum()
    }
}
