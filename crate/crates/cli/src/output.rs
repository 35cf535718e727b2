//! Tabular output as CSV (with a leading provenance comment) or JSON.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

pub const OUTPUT_DIR_ENV: &str = "LDE_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Text(String::new()), Cell::Float)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // 17 significant digits round-trip any f64.
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) => Value::Null,
            Cell::Bool(v) => json!(v),
            Cell::Text(v) if v.is_empty() => Value::Null,
            Cell::Text(v) => json!(v),
        }
    }
}

/// Result table of one command.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Provenance recorded with every output.
#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config: Value,
}

pub fn render(table: &Table, provenance: &Provenance, format: Format) -> CliResult<String> {
    match format {
        Format::Csv => {
            let mut out = format!(
                "# {} {} {} {}\n",
                provenance.tool,
                provenance.version,
                provenance.command,
                serde_json::to_string(&provenance.config).map_err(|e| CliError::Output(e.to_string()))?
            );
            let mut writer = csv::Writer::from_writer(Vec::new());
            let write_err = |e: csv::Error| CliError::Output(e.to_string());
            writer.write_record(&table.columns).map_err(write_err)?;
            for row in &table.rows {
                writer.write_record(row.iter().map(Cell::csv)).map_err(write_err)?;
            }
            let bytes = writer.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
            out.push_str(&String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))?);
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                .collect();
            let doc = json!({
                "tool": provenance.tool,
                "version": provenance.version,
                "command": provenance.command,
                "config": provenance.config,
                "columns": table.columns,
                "rows": rows,
            });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Output(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Relative output paths are placed under `LDE_OUTPUT_DIR` when it is set.
pub fn resolve_output(path: &Path, output_dir: Option<&Path>) -> PathBuf {
    match output_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
        Some(path) => {
            let io_err = |source| CliError::Io { path: path.display().to_string(), source };
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(io_err)?;
            }
            fs::write(path, text).map_err(io_err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Table, Provenance) {
        let mut t = Table::new(vec!["n", "x", "flag"]);
        t.push(vec![4usize.into(), 0.1.into(), true.into()]);
        let p = Provenance { tool: "xxlde", version: "0", command: "test", config: json!({"a": 1}) };
        (t, p)
    }

    #[test]
    fn csv_layout() {
        let (t, p) = sample();
        let s = render(&t, &p, Format::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# xxlde 0 test {\"a\":1}");
        assert_eq!(lines[1], "n,x,flag");
        assert_eq!(lines[2], "4,1.0000000000000001e-1,true");
        let parsed: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(parsed, 0.1);
    }

    #[test]
    fn json_layout() {
        let (t, p) = sample();
        let v: Value = serde_json::from_str(&render(&t, &p, Format::Json).unwrap()).unwrap();
        assert_eq!(v["columns"], json!(["n", "x", "flag"]));
        assert_eq!(v["rows"][0], json!([4, 0.1, true]));
    }

    #[test]
    fn output_dir_only_applies_to_relative_paths() {
        let dir = Path::new("/data");
        assert_eq!(resolve_output(Path::new("a.csv"), Some(dir)), PathBuf::from("/data/a.csv"));
        assert_eq!(resolve_output(Path::new("/x/a.csv"), Some(dir)), PathBuf::from("/x/a.csv"));
        assert_eq!(resolve_output(Path::new("a.csv"), None), PathBuf::from("a.csv"));
    }
}
