//! Flat tables written as CSV or JSON, and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use super::spec::{ExperimentSpec, OutputFormat};
use crate::error::{Error, Result};

/// Rows with a fixed column order. Nested arrays become `name_0, name_1, ...` and nested
/// objects `name.key`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

fn flatten(prefix: &str, v: Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if !prefix.is_empty() => {
            // one level of nesting per factor for points
            let flat: Vec<Value> = items
                .into_iter()
                .flat_map(|x| match x {
                    Value::Array(inner) => inner,
                    other => vec![other],
                })
                .collect();
            for (i, x) in flat.into_iter().enumerate() {
                out.push((format!("{prefix}_{i}"), x));
            }
        }
        other => out.push((prefix.to_string(), other)),
    }
}

impl Table {
    /// Columns are the union over all rows, in order of first appearance; missing cells are
    /// null.
    pub fn from_rows<T: Serialize>(rows: &[T]) -> Result<Self> {
        let mut flat_rows = Vec::with_capacity(rows.len());
        let mut columns: Vec<String> = Vec::new();
        for r in rows {
            let v = serde_json::to_value(r).map_err(|e| Error::InvalidRecord(e.to_string()))?;
            let mut cells = Vec::new();
            flatten("", v, &mut cells);
            for (k, _) in &cells {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
            flat_rows.push(cells);
        }
        let rows = flat_rows
            .into_iter()
            .map(|cells| {
                let mut row = vec![Value::Null; columns.len()];
                for (k, x) in cells {
                    let p = columns.iter().position(|c| *c == k).expect("column collected above");
                    row[p] = x;
                }
                row
            })
            .collect();
        Ok(Table { columns, rows })
    }

    fn cell(v: &Value) -> String {
        match v {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidRecord(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Self::cell)).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::InvalidRecord(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect::<Map<_, _>>()))
                .collect(),
        )
    }

    pub fn render(&self, format: OutputFormat) -> Result<Vec<u8>> {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => {
                let mut bytes =
                    serde_json::to_vec_pretty(&self.to_json()).map_err(|e| Error::InvalidRecord(e.to_string()))?;
                bytes.push(b'\n');
                Ok(bytes)
            }
        }
    }
}

/// Collects output files for one run and writes the manifest last.
#[derive(Debug)]
pub struct OutputDir {
    dir: PathBuf,
    format: OutputFormat,
    files: Vec<String>,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::InvalidConfig(format!("cannot write {}: {e}", path.display()))
}

impl OutputDir {
    pub fn create(dir: impl Into<PathBuf>, format: OutputFormat) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        Ok(Self { dir, format, files: Vec::new() })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let p = self.dir.join(name);
        fs::write(&p, bytes).map_err(|e| io_err(&p, e))?;
        self.files.push(name.to_string());
        Ok(p)
    }

    /// Writes `stem.csv` or `stem.json` depending on the format.
    pub fn write_table(&mut self, stem: &str, table: &Table) -> Result<PathBuf> {
        let ext = match self.format {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        };
        self.write_bytes(&format!("{stem}.{ext}"), &table.render(self.format)?)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Error::InvalidRecord(e.to_string()))?;
        bytes.push(b'\n');
        self.write_bytes(name, &bytes)
    }

    pub fn finish(mut self, spec: &ExperimentSpec, command: &str, numerical_failures: usize) -> Result<PathBuf> {
        let manifest = Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            platform: Platform {
                os: std::env::consts::OS.to_string(),
                arch: std::env::consts::ARCH.to_string(),
                family: std::env::consts::FAMILY.to_string(),
            },
            spec: spec.clone(),
            files: self.files.clone(),
            numerical_failures,
        };
        self.write_json("manifest.json", &manifest)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Platform {
    pub os: String,
    pub arch: String,
    pub family: String,
}

/// Written next to every output set; contains no timestamps so reruns are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub platform: Platform,
    pub spec: ExperimentSpec,
    pub files: Vec<String>,
    pub numerical_failures: usize,
}
