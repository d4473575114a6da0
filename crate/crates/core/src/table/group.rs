use std::collections::HashMap;

use crate::error::Result;

use super::{Cell, Table, Value};

/// Hashable form of a key cell. Missing keys form their own group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KeyAtom {
    Missing,
    Integer(i64),
    Numeric(u64),
    Boolean(bool),
    Text(String),
}

impl From<&Cell> for KeyAtom {
    fn from(cell: &Cell) -> Self {
        match cell {
            Cell::Missing => KeyAtom::Missing,
            Cell::Present(Value::Integer(v)) => KeyAtom::Integer(*v),
            // -0.0 and 0.0 share a group
            Cell::Present(Value::Numeric(v)) => KeyAtom::Numeric((v + 0.0).to_bits()),
            Cell::Present(Value::Boolean(v)) => KeyAtom::Boolean(*v),
            Cell::Present(Value::Text(v)) => KeyAtom::Text(v.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    /// One cell per key column.
    pub key: Vec<Cell>,
    /// Row indices into the base table, ascending.
    pub rows: Vec<usize>,
}

impl Group {
    /// Key cells rendered for display; missing keys use `na`.
    pub fn key_labels(&self, na: &str) -> Vec<String> {
        self.key
            .iter()
            .map(|c| match c {
                Cell::Missing => na.to_string(),
                Cell::Present(v) => v.to_string(),
            })
            .collect()
    }
}

/// A table partitioned by the values of its key columns.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedTable {
    base: Table,
    keys: Vec<String>,
    groups: Vec<Group>,
}

impl GroupedTable {
    pub fn base(&self) -> &Table {
        &self.base
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }
}

/// Partition rows by exact key-tuple equality, groups in order of first
/// appearance.
pub fn group_by(table: &Table, keys: &[&str]) -> Result<GroupedTable> {
    let key_cols = keys.iter().map(|k| table.column(k)).collect::<Result<Vec<_>>>()?;
    let mut index: HashMap<Vec<KeyAtom>, usize> = HashMap::new();
    let mut groups: Vec<Group> = Vec::new();
    for row in 0..table.n_rows() {
        let key: Vec<Cell> = key_cols.iter().map(|c| c.cell(row)).collect();
        let atoms: Vec<KeyAtom> = key.iter().map(KeyAtom::from).collect();
        match index.get(&atoms) {
            Some(&g) => groups[g].rows.push(row),
            None => {
                index.insert(atoms, groups.len());
                groups.push(Group { key, rows: vec![row] });
            }
        }
    }
    if keys.is_empty() && groups.is_empty() {
        groups.push(Group { key: Vec::new(), rows: Vec::new() });
    }
    Ok(GroupedTable { base: table.clone(), keys: keys.iter().map(|k| k.to_string()).collect(), groups })
}
