//! Result tables written as CSV (with `#` header comments) or JSON.
//!
//! Both formats carry the same fields: the command, the effective config, a
//! summary block, the column names and the rows.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qfs_core::Result;
use serde_json::{json, Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => write_number(f, *v),
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

/// Shortest round-trip digits, switching to exponent form for very small or
/// very large magnitudes.
fn write_number(f: &mut fmt::Formatter<'_>, v: f64) -> fmt::Result {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        write!(f, "{v:e}")
    } else {
        write!(f, "{v}")
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
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

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub summary: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, config: &[(String, String)], columns: &[&str]) -> Self {
        Self {
            command: command.into(),
            config: config.to_vec(),
            summary: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn summarize(&mut self, key: &str, value: impl Into<Cell>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# qfs {}\n", self.command);
        for (k, v) in &self.config {
            s += &format!("# {k} = {v}\n");
        }
        for (k, v) in &self.summary {
            s += &format!("# {k} = {v}\n");
        }
        s += &self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            s += &cells.join(",");
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let config: Map<String, Value> = self.config.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        json!({
            "command": self.command,
            "config": config,
            "summary": summary,
            "columns": self.columns,
            "rows": rows,
        })
    }

    /// Writes `<dir>/<stem>.<ext>`, creating `dir` if needed.
    pub fn write(&self, dir: &Path, stem: &str, format: Format) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{stem}.{}", format.extension()));
        let body = match format {
            Format::Csv => self.to_csv(),
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.to_json()).expect("tables serialize to JSON");
                text.push('\n');
                text
            }
        };
        fs::File::create(&path)?.write_all(body.as_bytes())?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &[("seed".into(), "3".into())], &["r", "error"]);
        t.summarize("best", 0.25);
        t.push(vec![1usize.into(), 0.5.into()]);
        t.push(vec![2usize.into(), 0.125.into()]);
        t
    }

    #[test]
    fn csv_layout() {
        assert_eq!(
            sample().to_csv(),
            "# qfs demo\n# seed = 3\n# best = 0.25\nr,error\n1,0.5\n2,0.125\n"
        );
    }

    #[test]
    fn number_forms() {
        assert_eq!(Cell::Num(2.5e-16).to_string(), "2.5e-16");
        assert_eq!(Cell::Num(0.001).to_string(), "0.001");
        assert_eq!(Cell::Num(-3.0).to_string(), "-3");
        assert_eq!(Cell::Num(0.0).to_string(), "0");
        assert_eq!(Cell::Num(f64::NAN).to_string(), "NaN");
    }

    #[test]
    fn json_mirrors_csv() {
        let v = sample().to_json();
        assert_eq!(v["config"]["seed"], "3");
        assert_eq!(v["summary"]["best"], 0.25);
        assert_eq!(v["columns"][1], "error");
        assert_eq!(v["rows"][1][1], 0.125);
    }

    #[test]
    fn writes_into_new_directory() {
        let dir = tempfile::tempdir().unwrap();
        let nested = dir.path().join("a/b");
        let path = sample().write(&nested, "demo", Format::Json).unwrap();
        assert!(path.ends_with("a/b/demo.json"));
        let text = fs::read_to_string(path).unwrap();
        assert!(text.contains("\"command\": \"demo\""));
    }
}
