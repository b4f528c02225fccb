#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

pub fn qfs() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qfs"));
    cmd.env_remove("QFS_OUT_DIR");
    cmd
}

pub fn run(args: &[&str], out: &Path) -> Output {
    qfs().args(args).arg("--out").arg(out).output().expect("qfs runs")
}

pub fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

/// Header comments (`# key = value`) and data rows of a CSV artifact.
pub struct Csv {
    pub header: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn read(path: &Path) -> Csv {
        let text = std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let mut header = BTreeMap::new();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.next_if(|l| l.starts_with('#')) {
            if let Some((k, v)) = line.trim_start_matches('#').split_once('=') {
                header.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        let columns = lines.next().expect("column row").split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Csv { header, columns, rows }
    }

    pub fn value(&self, key: &str) -> f64 {
        self.header[key].parse().unwrap()
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let i = self.columns.iter().position(|c| c == name).expect("column exists");
        self.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }
}
