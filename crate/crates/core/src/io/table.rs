use std::path::Path;

use crate::error::{Error, Result};

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// A header plus rows of already formatted cells.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Structural(format!(
                "row has {} cells, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Convenience for all-numeric rows.
    pub fn push_floats(&mut self, row: &[f64]) -> Result<()> {
        self.push(row.iter().map(|&x| fmt_float(x)).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let result = std::iter::once(&self.header)
            .chain(&self.rows)
            .try_for_each(|r| w.write_record(r));
        result.expect("writing CSV to memory");
        String::from_utf8(w.into_inner().expect("flushing CSV to memory")).expect("CSV from UTF-8 cells")
    }
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    super::write_file(path, &table.to_csv())
}
