//! Numeric CSV tables with optional cells.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    pub fn new(headers: Vec<String>) -> Self {
        Self { headers, rows: Vec::new() }
    }

    /// Appends a row given as `(column, value)` pairs; unknown columns are
    /// added on the fly and earlier rows padded with empty cells.
    pub fn push_named(&mut self, cells: &[(String, f64)]) {
        for (name, _) in cells {
            if !self.headers.contains(name) {
                self.headers.push(name.clone());
            }
        }
        let mut row = vec![None; self.headers.len()];
        for (name, v) in cells {
            let i = self.headers.iter().position(|h| h == name).expect("added above");
            row[i] = Some(*v);
        }
        self.rows.push(row);
    }

    /// Adds a column computed from each row's `t`.
    pub fn add_column(&mut self, name: &str, f: impl Fn(f64) -> Option<f64>) {
        let ti = self.headers.iter().position(|h| h == "t");
        self.headers.push(name.to_string());
        for r in &mut self.rows {
            let t = ti.and_then(|i| r.get(i).copied().flatten());
            r.resize(self.headers.len() - 1, None);
            r.push(t.and_then(&f));
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r.get(i).copied().flatten()).collect())
    }

    /// `(t, value)` pairs of a column, skipping empty cells.
    pub fn series(&self, name: &str) -> Result<Vec<(f64, f64)>> {
        let t = self.column("t").ok_or_else(|| Error::InvalidInput("table has no t column".into()))?;
        let v = self.column(name).ok_or_else(|| Error::InvalidInput(format!("table has no column {name}")))?;
        Ok(t.into_iter().zip(v).filter_map(|(t, v)| Some((t?, v?))).collect())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.headers)?;
        let width = self.headers.len();
        for r in &self.rows {
            let cells = (0..width).map(|i| match r.get(i).copied().flatten() {
                Some(v) => format!("{v:e}"),
                None => String::new(),
            });
            w.write_record(cells)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let headers = r.headers()?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let row = rec
                .iter()
                .map(|c| if c.is_empty() { Ok(None) } else { c.parse::<f64>().map(Some) })
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            rows.push(row);
        }
        Ok(Self { headers, rows })
    }
}

/// Loads every `*.csv` table of a run directory by file stem.
pub fn load_tables(dir: &Path) -> Result<BTreeMap<String, Table>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            out.insert(stem, Table::read(&path)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_gaps() {
        let mut t = Table::new(vec!["t".into()]);
        t.push_named(&[("t".into(), 0.0), ("a".into(), 1.5)]);
        t.push_named(&[("t".into(), 0.1), ("b".into(), -2.0e-17)]);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        t.write(&p).unwrap();
        let back = Table::read(&p).unwrap();
        assert_eq!(back.headers, vec!["t", "a", "b"]);
        assert_eq!(back.series("a").unwrap(), vec![(0.0, 1.5)]);
        assert_eq!(back.series("b").unwrap(), vec![(0.1, -2.0e-17)]);
        assert_eq!(load_tables(dir.path()).unwrap().len(), 1);
    }
}
