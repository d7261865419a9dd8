//! Deterministic CSV tables with provenance comment lines.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

use super::config::RunConfig;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Missing,
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Num(if v { 1.0 } else { 0.0 })
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Twelve significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 {
        // Keeps -0 and 0 byte-identical.
        "0.00000000000e0".into()
    } else {
        format!("{v:.11e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Missing => String::new(),
            Cell::Text(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem.
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_columns(name: impl Into<String>, columns: Vec<String>) -> Self {
        Self { name: name.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width in table {}", self.name);
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column; missing cells become `None`.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column_index(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[k] {
                    Cell::Num(v) => Some(v),
                    _ => None,
                })
                .collect(),
        )
    }

    /// CSV text with the given provenance lines.
    pub fn to_csv(&self, provenance: &Provenance) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        writeln!(out, "# twinbeam {}", provenance.version)?;
        writeln!(out, "# config_sha256 {}", provenance.config_hash)?;
        writeln!(out, "# table {}", self.name)?;
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(&self.columns)?;
            for r in &self.rows {
                w.write_record(r.iter().map(Cell::render))?;
            }
            w.flush()?;
        }
        Ok(out)
    }

    pub fn write(&self, dir: &Path, provenance: &Provenance) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.csv", self.name));
        fs::write(&path, self.to_csv(provenance)?)?;
        Ok(path)
    }
}

/// Identifies the configuration and code behind an output. The timestamp
/// is kept out of the CSV files so they stay byte-identical across runs.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Provenance {
    pub config_hash: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Provenance {
    pub fn new(cfg: &RunConfig) -> Self {
        let timestamp =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self { config_hash: config_hash(cfg), version: CODE_VERSION.into(), timestamp }
    }
}

/// SHA-256 of the physics inputs; output settings are left out so the same
/// run written to another directory produces identical bytes.
pub fn config_hash(cfg: &RunConfig) -> String {
    let physics = RunConfig { outputs: Default::default(), ..cfg.clone() };
    let json = serde_json::to_string(&physics).expect("config serializes");
    Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, serde::Serialize)]
struct Manifest<'a> {
    provenance: &'a Provenance,
    files: Vec<String>,
    cells: usize,
    failures: usize,
}

/// Writes the tables plus a `manifest.json` carrying the timestamp.
pub fn write_tables(
    tables: &[Table],
    dir: &Path,
    provenance: &Provenance,
    cells: usize,
    failures: usize,
) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::with_capacity(tables.len() + 1);
    for t in tables {
        paths.push(t.write(dir, provenance)?);
    }
    let manifest =
        Manifest { provenance, files: tables.iter().map(|t| format!("{}.csv", t.name)).collect(), cells, failures };
    let path = dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    paths.push(path);
    Ok(paths)
}
