//! CSV artifacts: surfaces, slices, moments and snapshots.
//!
//! Every value is written with 17 significant digits, rows end in `\n`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::gpc::Moments;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CsvKind {
    Surface,
    Slice,
    Moments,
    Snapshot,
}

impl CsvKind {
    pub fn name(self) -> &'static str {
        match self {
            CsvKind::Surface => "surface",
            CsvKind::Slice => "slice",
            CsvKind::Moments => "moments",
            CsvKind::Snapshot => "snapshot",
        }
    }
}

/// A header and rows of reals.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Csv(format!(
                "row has {} values for {} columns",
                row.len(),
                self.header.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let written = w.write_record(&self.header).and_then(|_| {
            self.rows.iter().try_for_each(|row| {
                w.write_record(row.iter().map(|v| format!("{v:.16e}")))
            })
        });
        written.expect("writing to memory cannot fail");
        let bytes = w.into_inner().expect("flushing to memory cannot fail");
        String::from_utf8(bytes).expect("numbers and headers are ASCII")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header: Vec<String> = r
            .headers()
            .map_err(|e| Error::Csv(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if header.is_empty() {
            return Err(Error::Csv("missing header".into()));
        }
        let mut table = Self { header, rows: Vec::new() };
        for record in r.records() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line());
            let row = record
                .iter()
                .map(|v| v.parse::<f64>().map_err(|e| Error::Csv(format!("line {line}: {v:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            table.push(row).map_err(|e| Error::Csv(format!("line {line}: {e}")))?;
        }
        Ok(table)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }
}

/// `x,xi,value`, row-major over `x` then `xi`; `values[cell][i]`.
pub fn surface_table(xs: &[f64], xis: &[f64], values: &[Vec<f64>]) -> Result<Table> {
    if values.len() != xs.len() || values.iter().any(|v| v.len() != xis.len()) {
        return Err(Error::Csv("surface payload does not match its axes".into()));
    }
    let mut t = Table::new(&["x", "xi", "value"]);
    for (x, row) in xs.iter().zip(values) {
        for (xi, v) in xis.iter().zip(row) {
            t.push(vec![*x, *xi, *v])?;
        }
    }
    Ok(t)
}

/// `xi,value`.
pub fn slice_table(xis: &[f64], values: &[f64]) -> Result<Table> {
    if xis.len() != values.len() {
        return Err(Error::Csv("slice payload does not match its axis".into()));
    }
    let mut t = Table::new(&["xi", "value"]);
    for (xi, v) in xis.iter().zip(values) {
        t.push(vec![*xi, *v])?;
    }
    Ok(t)
}

/// `x,mean,stddev`.
pub fn moments_table(xs: &[f64], moments: &[Moments]) -> Result<Table> {
    if xs.len() != moments.len() {
        return Err(Error::Csv("moments payload does not match its axis".into()));
    }
    let mut t = Table::new(&["x", "mean", "stddev"]);
    for (x, m) in xs.iter().zip(moments) {
        t.push(vec![*x, m.mean, m.stddev])?;
    }
    Ok(t)
}

/// `x,<names>` with one column per component.
pub fn snapshot_table(xs: &[f64], names: &[&str], columns: &[Vec<f64>]) -> Result<Table> {
    if names.len() != columns.len() || columns.iter().any(|c| c.len() != xs.len()) {
        return Err(Error::Csv("snapshot payload does not match its axis".into()));
    }
    let mut header = vec!["x"];
    header.extend_from_slice(names);
    let mut t = Table::new(&header);
    for (j, x) in xs.iter().enumerate() {
        let mut row = vec![*x];
        row.extend(columns.iter().map(|c| c[j]));
        t.push(row)?;
    }
    Ok(t)
}

/// `{stem}_{method}_{kind}_{points}.csv`
pub fn artifact_name(stem: &str, method: &str, kind: &str, points: usize) -> String {
    format!("{stem}_{method}_{kind}_{points}.csv")
}
