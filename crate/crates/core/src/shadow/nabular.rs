use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::table::{self, Column, NaTokenConfig, RawTable, Table};

use super::{
    as_shadow, validate_suffix, LevelRegistry, ShadowLevel, ShadowMatrix, WhereClause, MISSING, NOT_MISSING,
    SHADOW_SUFFIX,
};

/// Data column-bound with its shadow matrix, plus optional trailing
/// annotation columns (e.g. `any_missing`).
#[derive(Debug, Clone, PartialEq)]
pub struct NabularTable {
    data: Table,
    shadow: ShadowMatrix,
    annotations: Vec<Column>,
}

/// Bind a table with its shadow matrix.
pub fn nabular(table: &Table) -> Result<NabularTable> {
    Ok(NabularTable { shadow: as_shadow(table)?, data: table.clone(), annotations: Vec::new() })
}

impl NabularTable {
    pub fn data(&self) -> &Table {
        &self.data
    }

    pub fn shadow(&self) -> &ShadowMatrix {
        &self.shadow
    }

    pub fn registry(&self) -> &LevelRegistry {
        self.shadow.registry()
    }

    pub fn annotations(&self) -> &[Column] {
        &self.annotations
    }

    pub fn n_rows(&self) -> usize {
        self.data.n_rows()
    }

    /// Total column count: data, shadow, annotations.
    pub fn n_cols(&self) -> usize {
        self.data.n_cols() + self.shadow.n_cols() + self.annotations.len()
    }

    /// Swap in new data of the same shape, leaving the shadow untouched.
    ///
    /// This is the tracking path: imputed cells stay marked in the shadow.
    pub fn with_data(&self, data: Table) -> Result<NabularTable> {
        self.check_shape(&data)?;
        Ok(NabularTable { data, shadow: self.shadow.clone(), annotations: self.annotations.clone() })
    }

    /// Swap in new data and mark newly missing cells `NA` in the shadow.
    /// Cells already carrying a non-`!NA` level keep it.
    pub fn with_data_synced(&self, data: Table) -> Result<NabularTable> {
        self.check_shape(&data)?;
        let mut shadow = self.shadow.clone();
        for (j, col) in data.columns().iter().enumerate() {
            let codes = shadow.codes_mut(j);
            for (code, missing) in codes.iter_mut().zip(col.missing_mask()) {
                if missing && *code == NOT_MISSING {
                    *code = MISSING;
                }
            }
        }
        Ok(NabularTable { data, shadow, annotations: self.annotations.clone() })
    }

    fn check_shape(&self, data: &Table) -> Result<()> {
        if data.n_rows() != self.data.n_rows() || data.names() != self.data.names() {
            return Err(Error::Schema("replacement data must keep the nabular table's columns and rows".into()));
        }
        Ok(())
    }

    /// Append an annotation column after the shadow block.
    pub fn with_annotation(&self, column: Column) -> Result<NabularTable> {
        let taken = self.data.contains(column.name())
            || self.shadow.columns().iter().any(|c| c.name() == column.name())
            || self.annotations.iter().any(|c| c.name() == column.name());
        if taken {
            return Err(Error::NameCollision(column.name().to_string()));
        }
        if column.len() != self.n_rows() {
            return Err(Error::Schema(format!(
                "annotation `{}` has {} cells, expected {}",
                column.name(),
                column.len(),
                self.n_rows()
            )));
        }
        let mut out = self.clone();
        out.annotations.push(column);
        Ok(out)
    }

    pub fn annotation(&self, name: &str) -> Option<&Column> {
        self.annotations.iter().find(|c| c.name() == name)
    }

    /// Missing data cells must have a non-`!NA` shadow level, and an `NA`
    /// level must sit on a missing data cell. Special levels may flag
    /// present cells.
    pub fn check_synchrony(&self) -> Result<()> {
        for (j, col) in self.data.columns().iter().enumerate() {
            let shadow = &self.shadow.columns()[j];
            for (r, missing) in col.missing_mask().into_iter().enumerate() {
                let code = shadow.codes()[r];
                let ok = if missing { code != NOT_MISSING } else { code != MISSING };
                if !ok {
                    return Err(Error::Validation(format!(
                        "shadow out of sync at row {}, column `{}`",
                        r + 1,
                        col.name()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Row-level label: true when any shadow cell in the row is not `!NA`.
    pub fn any_missing_rows(&self) -> Vec<bool> {
        (0..self.n_rows()).map(|r| self.shadow.columns().iter().any(|c| c.is_missing(r))).collect()
    }

    /// Flatten to a plain table whose shadow columns hold the level labels.
    pub fn to_table(&self) -> Table {
        let mut columns: Vec<Column> = self.data.columns().to_vec();
        for sc in self.shadow.columns() {
            let labels: Vec<Option<String>> =
                sc.codes().iter().map(|&c| Some(self.shadow.registry().level(c).to_string())).collect();
            columns.push(Column::text(sc.name(), labels));
        }
        columns.extend(self.annotations.iter().cloned());
        Table::with_rows(columns, self.n_rows()).expect("nabular column names are unique")
    }

    /// Delimited text: data, then shadow labels, then annotations.
    pub fn write_delimited<W: Write>(&self, sink: W, config: &NaTokenConfig) -> Result<()> {
        table::write_delimited(&self.to_table(), sink, config)
    }

    /// Read a nabular table previously written by [`NabularTable::write_delimited`].
    pub fn read_delimited<R: Read>(source: R, config: &NaTokenConfig) -> Result<NabularTable> {
        let raw = table::read_raw(source)?;
        Self::from_raw(&raw, config)?.ok_or_else(|| Error::Schema("input is not a nabular table".into()))
    }

    /// Interpret raw cells as a nabular table when the header has the layout
    /// `v1..vk, v1_NA..vk_NA, annotations..` with k ≥ 1; `None` otherwise.
    pub fn from_raw(raw: &RawTable, config: &NaTokenConfig) -> Result<Option<NabularTable>> {
        let Some(k) = nabular_layout(&raw.headers) else {
            return Ok(None);
        };
        let mut data_cols = Vec::with_capacity(k);
        for j in 0..k {
            data_cols.push(table::io_type_column(&raw.headers[j], &raw.columns[j], config)?);
        }
        let data = Table::with_rows(data_cols, raw.n_rows)?;

        let mut registry = LevelRegistry::default();
        let mut shadow_cols = Vec::with_capacity(k);
        for j in 0..k {
            let codes = raw.columns[k + j]
                .iter()
                .enumerate()
                .map(|(r, s)| {
                    let level: ShadowLevel = s.trim().parse().map_err(|_| Error::Parse {
                        row: r + 2,
                        message: format!("`{s}` in `{}` is not a shadow level", raw.headers[k + j]),
                    })?;
                    Ok(registry.insert(level))
                })
                .collect::<Result<Vec<u32>>>()?;
            shadow_cols.push((raw.headers[j].clone(), codes));
        }
        let shadow = ShadowMatrix::from_parts(shadow_cols, registry, raw.n_rows);

        let annotations = (2 * k..raw.headers.len())
            .map(|j| table::io_type_column(&raw.headers[j], &raw.columns[j], config))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(NabularTable { data, shadow, annotations }))
    }
}

fn nabular_layout(headers: &[String]) -> Option<usize> {
    let k = headers.iter().position(|h| h.ends_with(SHADOW_SUFFIX))?;
    if k == 0 || headers.len() < 2 * k {
        return None;
    }
    let paired = (0..k).all(|j| headers[k + j] == format!("{}{SHADOW_SUFFIX}", headers[j]));
    let rest_plain = headers[2 * k..].iter().all(|h| !h.ends_with(SHADOW_SUFFIX));
    (paired && rest_plain).then_some(k)
}

/// Mark rows satisfying `clause` with the special level `NA_<suffix>` in
/// `var`'s shadow column. Data cells are never changed; the new level is
/// registered for every shadow column even when no row matches.
pub fn recode_shadow(nab: &NabularTable, var: &str, clause: &WhereClause, suffix: &str) -> Result<NabularTable> {
    let col = nab.data.index_of(var)?;
    validate_suffix(suffix)?;
    let rows = clause.matching_rows(&nab.data)?;
    let mut out = nab.clone();
    let code = out.shadow.registry_mut().insert(ShadowLevel::Special(suffix.to_string()));
    let codes = out.shadow.codes_mut(col);
    for (c, hit) in codes.iter_mut().zip(rows) {
        if hit {
            *c = code;
        }
    }
    Ok(out)
}
