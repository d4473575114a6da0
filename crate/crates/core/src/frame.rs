use crate::error::Result;
use crate::shadow::NabularTable;
use crate::table::Table;

/// Something that carries a data table: a plain [`Table`] or a
/// [`NabularTable`]. Lets the verbs accept either and return the same kind.
pub trait Frame: Sized {
    fn data(&self) -> &Table;

    /// Replace the data, leaving any shadow untouched (imputation tracking).
    fn with_data(&self, data: Table) -> Result<Self>;

    /// Replace the data and mark newly missing cells in any shadow.
    fn with_data_synced(&self, data: Table) -> Result<Self>;
}

impl Frame for Table {
    fn data(&self) -> &Table {
        self
    }

    fn with_data(&self, data: Table) -> Result<Self> {
        Ok(data)
    }

    fn with_data_synced(&self, data: Table) -> Result<Self> {
        Ok(data)
    }
}

impl Frame for NabularTable {
    fn data(&self) -> &Table {
        NabularTable::data(self)
    }

    fn with_data(&self, data: Table) -> Result<Self> {
        NabularTable::with_data(self, data)
    }

    fn with_data_synced(&self, data: Table) -> Result<Self> {
        NabularTable::with_data_synced(self, data)
    }
}
