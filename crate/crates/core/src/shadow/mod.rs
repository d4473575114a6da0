//! Shadow matrices and nabular tables.
//!
//! A shadow matrix mirrors the shape of a table; each cell records the
//! missingness state of the matching data cell as a categorical level
//! (`!NA`, `NA` or `NA_<suffix>`). All shadow columns of one matrix share a
//! single [`LevelRegistry`], so every column knows every level.

mod nabular;
mod predicate;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::table::Table;

pub use nabular::{nabular, recode_shadow, NabularTable};
pub use predicate::{Comparator, Predicate, WhereClause};

/// Suffix appended to a variable name to name its shadow column.
pub const SHADOW_SUFFIX: &str = "_NA";

/// Missingness level of one shadow cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShadowLevel {
    NotMissing,
    Missing,
    Special(String),
}

impl ShadowLevel {
    /// A special level; the suffix must match `[a-z0-9_]+`.
    pub fn special(suffix: &str) -> Result<ShadowLevel> {
        validate_suffix(suffix)?;
        Ok(ShadowLevel::Special(suffix.to_string()))
    }

    pub fn is_missing(&self) -> bool {
        !matches!(self, ShadowLevel::NotMissing)
    }
}

fn validate_suffix(suffix: &str) -> Result<()> {
    let ok = !suffix.is_empty() && suffix.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_');
    if ok {
        Ok(())
    } else {
        Err(Error::Validation(format!("special-missing suffix `{suffix}` must match [a-z0-9_]+")))
    }
}

impl fmt::Display for ShadowLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShadowLevel::NotMissing => f.write_str("!NA"),
            ShadowLevel::Missing => f.write_str("NA"),
            ShadowLevel::Special(s) => write!(f, "NA_{s}"),
        }
    }
}

impl FromStr for ShadowLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "!NA" => Ok(ShadowLevel::NotMissing),
            "NA" => Ok(ShadowLevel::Missing),
            other => match other.strip_prefix("NA_") {
                Some(suffix) => ShadowLevel::special(suffix),
                None => Err(Error::Validation(format!("`{other}` is not a shadow level"))),
            },
        }
    }
}

impl Serialize for ShadowLevel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Ordered, append-only set of levels; always starts with `!NA`, `NA`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelRegistry {
    levels: Vec<ShadowLevel>,
}

impl Default for LevelRegistry {
    fn default() -> Self {
        LevelRegistry { levels: vec![ShadowLevel::NotMissing, ShadowLevel::Missing] }
    }
}

pub(crate) const NOT_MISSING: u32 = 0;
pub(crate) const MISSING: u32 = 1;

impl LevelRegistry {
    pub fn levels(&self) -> &[ShadowLevel] {
        &self.levels
    }

    pub fn code(&self, level: &ShadowLevel) -> Option<u32> {
        self.levels.iter().position(|l| l == level).map(|i| i as u32)
    }

    pub fn level(&self, code: u32) -> &ShadowLevel {
        &self.levels[code as usize]
    }

    /// Register a level, returning its code.
    pub fn insert(&mut self, level: ShadowLevel) -> u32 {
        match self.code(&level) {
            Some(c) => c,
            None => {
                self.levels.push(level);
                (self.levels.len() - 1) as u32
            }
        }
    }
}

/// Categorical shadow column: codes index into the owning registry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowColumn {
    variable: String,
    codes: Vec<u32>,
}

impl ShadowColumn {
    /// The data variable this column shadows.
    pub fn variable(&self) -> &str {
        &self.variable
    }

    /// `<variable>_NA`.
    pub fn name(&self) -> String {
        format!("{}{SHADOW_SUFFIX}", self.variable)
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn is_missing(&self, row: usize) -> bool {
        self.codes[row] != NOT_MISSING
    }
}

/// Missingness matrix of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowMatrix {
    columns: Vec<ShadowColumn>,
    registry: LevelRegistry,
    n_rows: usize,
}

impl ShadowMatrix {
    pub(crate) fn from_parts(columns: Vec<(String, Vec<u32>)>, registry: LevelRegistry, n_rows: usize) -> Self {
        let columns = columns.into_iter().map(|(variable, codes)| ShadowColumn { variable, codes }).collect();
        ShadowMatrix { columns, registry, n_rows }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[ShadowColumn] {
        &self.columns
    }

    pub fn registry(&self) -> &LevelRegistry {
        &self.registry
    }

    pub fn variables(&self) -> Vec<&str> {
        self.columns.iter().map(ShadowColumn::variable).collect()
    }

    pub fn column(&self, variable: &str) -> Result<&ShadowColumn> {
        self.columns
            .iter()
            .find(|c| c.variable == variable)
            .ok_or_else(|| Error::UnknownColumn(format!("{variable}{SHADOW_SUFFIX}")))
    }

    pub fn level(&self, row: usize, col: usize) -> &ShadowLevel {
        self.registry.level(self.columns[col].codes[row])
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.columns[col].is_missing(row)
    }

    /// Number of cells whose level is not `!NA`.
    pub fn n_missing(&self) -> usize {
        self.columns.iter().map(|c| c.codes.iter().filter(|&&x| x != NOT_MISSING).count()).sum()
    }

    pub(crate) fn registry_mut(&mut self) -> &mut LevelRegistry {
        &mut self.registry
    }

    pub(crate) fn codes_mut(&mut self, col: usize) -> &mut Vec<u32> {
        &mut self.columns[col].codes
    }

    /// Row-major missingness flags.
    pub fn missing_rows(&self) -> Vec<Vec<bool>> {
        (0..self.n_rows).map(|r| self.columns.iter().map(|c| c.is_missing(r)).collect()).collect()
    }
}

/// Shadow matrix of `table`: `NA` where the data cell is missing, else `!NA`.
pub fn as_shadow(table: &Table) -> Result<ShadowMatrix> {
    let mut columns = Vec::with_capacity(table.n_cols());
    for c in table.columns() {
        if c.name().ends_with(SHADOW_SUFFIX) {
            return Err(Error::NameCollision(format!("{} (data columns may not end in `{SHADOW_SUFFIX}`)", c.name())));
        }
        let codes = c.missing_mask().into_iter().map(|m| if m { MISSING } else { NOT_MISSING }).collect();
        columns.push((c.name().to_string(), codes));
    }
    Ok(ShadowMatrix::from_parts(columns, LevelRegistry::default(), table.n_rows()))
}

/// One record of the long-form shadow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LongShadowRecord {
    /// 1-based case number.
    pub case: usize,
    pub variable: String,
    pub level: ShadowLevel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LongShadow {
    pub records: Vec<LongShadowRecord>,
}

/// Long form of a shadow matrix, variable-major then case order.
pub fn shadow_long(shadow: &ShadowMatrix) -> LongShadow {
    let records = shadow
        .columns
        .iter()
        .flat_map(|c| {
            c.codes.iter().enumerate().map(|(r, &code)| LongShadowRecord {
                case: r + 1,
                variable: c.variable.clone(),
                level: shadow.registry.level(code).clone(),
            })
        })
        .collect();
    LongShadow { records }
}
