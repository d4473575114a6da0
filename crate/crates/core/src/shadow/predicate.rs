use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::table::{Cell, Table, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    IsMissing,
}

impl Comparator {
    fn symbol(self) -> &'static str {
        match self {
            Comparator::Eq => "==",
            Comparator::Ne => "!=",
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
            Comparator::IsMissing => "is_missing",
        }
    }

    fn accepts(self, ord: Ordering) -> bool {
        match self {
            Comparator::Eq => ord == Ordering::Equal,
            Comparator::Ne => ord != Ordering::Equal,
            Comparator::Lt => ord == Ordering::Less,
            Comparator::Le => ord != Ordering::Greater,
            Comparator::Gt => ord == Ordering::Greater,
            Comparator::Ge => ord != Ordering::Less,
            Comparator::IsMissing => false,
        }
    }
}

/// `column <op> constant`, or `column is_missing`.
#[derive(Debug, Clone, PartialEq)]
pub struct Predicate {
    pub column: String,
    pub comparator: Comparator,
    pub constant: Option<Value>,
}

impl Predicate {
    pub fn compare(column: impl Into<String>, comparator: Comparator, constant: Value) -> Self {
        Predicate { column: column.into(), comparator, constant: Some(constant) }
    }

    pub fn is_missing(column: impl Into<String>) -> Self {
        Predicate { column: column.into(), comparator: Comparator::IsMissing, constant: None }
    }

    /// Missing cells only ever satisfy `is_missing`; mismatched types never
    /// compare.
    pub fn matches_cell(&self, cell: &Cell) -> bool {
        match (self.comparator, cell) {
            (Comparator::IsMissing, c) => c.is_missing(),
            (_, Cell::Missing) => false,
            (cmp, Cell::Present(v)) => match (v, self.constant.as_ref()) {
                (_, None) => false,
                (Value::Text(a), Some(Value::Text(b))) => cmp.accepts(a.as_str().cmp(b.as_str())),
                (Value::Boolean(a), Some(Value::Boolean(b))) => cmp.accepts(a.cmp(b)),
                (a, Some(b)) => match (a.as_f64(), b.as_f64()) {
                    (Some(x), Some(y)) => x.partial_cmp(&y).is_some_and(|o| cmp.accepts(o)),
                    _ => false,
                },
            },
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.constant {
            Some(c) => write!(f, "{} {} {}", self.column, self.comparator.symbol(), c),
            None => write!(f, "{} {}", self.column, self.comparator.symbol()),
        }
    }
}

impl FromStr for Predicate {
    type Err = Error;

    /// Parses `col == -99`, `col != "N/A"`, `col >= 3.5`, `col is_missing`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(col) = s.strip_suffix("is_missing") {
            let col = col.trim();
            if !col.is_empty() {
                return Ok(Predicate::is_missing(col));
            }
        }
        // longest operators first so `<=` is not read as `<`
        const OPS: [(&str, Comparator); 6] = [
            ("==", Comparator::Eq),
            ("!=", Comparator::Ne),
            ("<=", Comparator::Le),
            (">=", Comparator::Ge),
            ("<", Comparator::Lt),
            (">", Comparator::Gt),
        ];
        let found = OPS
            .iter()
            .filter_map(|(sym, cmp)| s.find(sym).map(|pos| (pos, *sym, *cmp)))
            .min_by_key(|(pos, sym, _)| (*pos, std::cmp::Reverse(sym.len())));
        let Some((pos, sym, cmp)) = found else {
            return Err(Error::Validation(format!("cannot parse condition `{s}`")));
        };
        let column = s[..pos].trim();
        let rhs = s[pos + sym.len()..].trim();
        if column.is_empty() || rhs.is_empty() {
            return Err(Error::Validation(format!("cannot parse condition `{s}`")));
        }
        let constant = match rhs
            .strip_prefix('"')
            .and_then(|r| r.strip_suffix('"'))
            .or_else(|| rhs.strip_prefix('\'').and_then(|r| r.strip_suffix('\'')))
        {
            Some(quoted) => Value::Text(quoted.to_string()),
            None => Value::parse_literal(rhs),
        };
        Ok(Predicate::compare(column, cmp, constant))
    }
}

/// Conjunction of predicates over one row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WhereClause {
    pub predicates: Vec<Predicate>,
}

impl WhereClause {
    pub fn new(predicates: Vec<Predicate>) -> Self {
        WhereClause { predicates }
    }

    /// Check that every referenced column exists.
    pub fn validate(&self, table: &Table) -> Result<()> {
        for p in &self.predicates {
            table.index_of(&p.column)?;
        }
        Ok(())
    }

    /// Rows satisfying every predicate.
    pub fn matching_rows(&self, table: &Table) -> Result<Vec<bool>> {
        self.validate(table)?;
        let cols: Vec<_> = self.predicates.iter().map(|p| table.column(&p.column)).collect::<Result<_>>()?;
        Ok((0..table.n_rows())
            .map(|r| self.predicates.iter().zip(&cols).all(|(p, c)| p.matches_cell(&c.cell(r))))
            .collect())
    }
}

impl FromStr for WhereClause {
    type Err = Error;

    /// Predicates joined by `&`.
    fn from_str(s: &str) -> Result<Self> {
        let predicates =
            s.split('&').map(str::trim).filter(|p| !p.is_empty()).map(str::parse).collect::<Result<Vec<_>>>()?;
        if predicates.is_empty() {
            return Err(Error::Validation("empty condition".into()));
        }
        Ok(WhereClause { predicates })
    }
}
