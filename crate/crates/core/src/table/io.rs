use std::collections::HashSet;
use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::{Column, ColumnData, Table};

/// Which raw strings count as missing on ingest.
///
/// Tokens are compared exactly (case-sensitive) after trimming surrounding
/// whitespace. The first token is the one written for missing cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaTokenConfig {
    tokens: Vec<String>,
}

impl Default for NaTokenConfig {
    fn default() -> Self {
        NaTokenConfig { tokens: vec!["NA".to_string(), String::new()] }
    }
}

impl NaTokenConfig {
    pub fn new<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Result<Self> {
        let mut tokens: Vec<String> = tokens.into_iter().map(|t| t.into().trim().to_string()).collect();
        let mut seen = HashSet::new();
        tokens.retain(|t| seen.insert(t.clone()));
        if tokens.is_empty() {
            return Err(Error::Validation("at least one NA token is required".into()));
        }
        Ok(NaTokenConfig { tokens })
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn is_na(&self, raw: &str) -> bool {
        let t = raw.trim();
        self.tokens.iter().any(|tok| tok == t)
    }

    /// Token written for missing cells.
    pub fn output_token(&self) -> &str {
        &self.tokens[0]
    }
}

/// Header plus untyped column-major cell strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<String>>,
    pub n_rows: usize,
}

/// Parse comma-delimited text with a header row, without any typing.
pub fn read_raw<R: Read>(source: R) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(source);
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::Schema("input has no header row".into()));
    }
    let mut seen = HashSet::new();
    for h in &headers {
        if h.is_empty() {
            return Err(Error::Schema("empty column name in header".into()));
        }
        if !seen.insert(h.as_str()) {
            return Err(Error::Schema(format!("duplicate header `{h}`")));
        }
    }
    let mut columns = vec![Vec::new(); headers.len()];
    let mut n_rows = 0;
    for record in reader.records() {
        let record = record?;
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.push(field.to_string());
        }
        n_rows += 1;
    }
    Ok(RawTable { headers, columns, n_rows })
}

pub(crate) fn parse_finite(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

pub(crate) fn parse_bool(s: &str) -> Option<bool> {
    match s {
        "true" | "TRUE" | "True" => Some(true),
        "false" | "FALSE" | "False" => Some(false),
        _ => None,
    }
}

/// Infer the narrowest dtype (integer, numeric, boolean, text) that fits
/// every present value.
pub(crate) fn type_column(name: &str, raw: &[String], config: &NaTokenConfig) -> Result<Column> {
    let present: Vec<Option<&str>> = raw.iter().map(|s| (!config.is_na(s)).then_some(s.as_str())).collect();
    let all = |f: &dyn Fn(&str) -> bool| present.iter().flatten().all(|s| f(s.trim()));

    let data = if all(&|s| s.parse::<i64>().is_ok()) {
        ColumnData::Integer(present.iter().map(|c| c.map(|s| s.trim().parse().unwrap())).collect())
    } else if all(&|s| parse_finite(s).is_some()) {
        ColumnData::Numeric(present.iter().map(|c| c.and_then(|s| parse_finite(s.trim()))).collect())
    } else if all(&|s| parse_bool(s).is_some()) {
        ColumnData::Boolean(present.iter().map(|c| c.and_then(|s| parse_bool(s.trim()))).collect())
    } else {
        ColumnData::Text(present.iter().map(|c| c.map(str::to_string)).collect())
    };
    Column::new(name, data)
}

/// Read a typed table from delimited text.
pub fn read_delimited<R: Read>(source: R, config: &NaTokenConfig) -> Result<Table> {
    table_from_raw(&read_raw(source)?, config)
}

/// Type the columns of already-split delimited text.
pub fn table_from_raw(raw: &RawTable, config: &NaTokenConfig) -> Result<Table> {
    let columns = raw
        .headers
        .iter()
        .zip(&raw.columns)
        .map(|(h, cells)| type_column(h, cells, config))
        .collect::<Result<Vec<_>>>()?;
    Table::with_rows(columns, raw.n_rows)
}

/// Write `headers` and column-major rendered cells as delimited text.
fn write_rendered<W: Write>(sink: W, headers: &[&str], columns: &[Vec<String>], n_rows: usize) -> Result<()> {
    if headers.is_empty() {
        return Ok(());
    }
    let mut writer = csv::WriterBuilder::new().from_writer(sink);
    writer.write_record(headers)?;
    for r in 0..n_rows {
        writer.write_record(columns.iter().map(|c| c[r].as_str()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Serialize a table as delimited text; missing cells become the config's
/// first token.
pub fn write_delimited<W: Write>(table: &Table, sink: W, config: &NaTokenConfig) -> Result<()> {
    let na = config.output_token();
    let headers = table.names();
    let columns: Vec<Vec<String>> =
        table.columns().iter().map(|c| (0..table.n_rows()).map(|r| c.render(r, na)).collect()).collect();
    write_rendered(sink, &headers, &columns, table.n_rows())
}
