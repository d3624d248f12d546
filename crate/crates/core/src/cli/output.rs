//! Dataset emission. Numbers are written with 17 significant digits in CSV
//! and as shortest round-trip decimals in JSON, so both encodings parse to
//! identical `f64` values.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use super::config::Format;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => num_value(*v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(u64::from(v))
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// Fixed 17-significant-digit scientific notation.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

/// JSON number, or a string for non-finite values.
pub fn num_value(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(v.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV text. `header_comments` become `# ` lines; when `column_comment`
    /// is set it replaces the plain column header line.
    pub fn to_csv(&self, header_comments: &[String], column_comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = column_comment {
            let _ = writeln!(out, "# {c}");
        }
        for c in header_comments {
            let _ = writeln!(out, "# {c}");
        }
        if column_comment.is_none() {
            let _ = writeln!(out, "{}", self.columns.join(","));
        }
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, meta: Map<String, Value>) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let mut obj = meta;
        obj.insert("columns".into(), json!(self.columns));
        obj.insert("rows".into(), Value::Array(rows));
        Value::Object(obj)
    }
}

/// Collects emitted files under one output directory.
pub struct Emitter {
    dir: PathBuf,
    provenance: String,
    written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(dir: &Path, provenance: String) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            provenance,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.written.push(path.clone());
        Ok(path)
    }

    fn config_value(&self) -> Value {
        serde_json::from_str(&self.provenance).expect("provenance is JSON")
    }

    /// Writes `stem.csv` or `stem.json`.
    pub fn table(
        &mut self,
        stem: &str,
        table: &Table,
        format: Format,
        extra: &[(&str, String)],
        column_comment: Option<&str>,
    ) -> Result<PathBuf> {
        let name = format!("{stem}.{}", format.extension());
        match format {
            Format::Csv => {
                let mut comments: Vec<String> = extra.iter().map(|(k, v)| format!("{k}={v}")).collect();
                comments.push(format!("config={}", self.provenance));
                let text = table.to_csv(&comments, column_comment);
                self.write(&name, &text)
            }
            Format::Json => {
                let mut meta = Map::new();
                meta.insert("config".into(), self.config_value());
                for (k, v) in extra {
                    meta.insert((*k).into(), json!(v));
                }
                let text = serde_json::to_string_pretty(&table.to_json(meta))? + "\n";
                self.write(&name, &text)
            }
        }
    }

    /// Writes a JSON document with the config embedded under `"config"`.
    pub fn json(&mut self, name: &str, mut body: Map<String, Value>) -> Result<PathBuf> {
        body.insert("config".into(), self.config_value());
        let text = serde_json::to_string_pretty(&Value::Object(body))? + "\n";
        self.write(name, &text)
    }
}
