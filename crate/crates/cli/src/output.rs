//! Row tables rendered as CSV or JSON, written in one piece.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::{ExperimentConfig, Format};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

/// A float as JSON; non-finite values become the strings `inf`, `-inf`, `nan`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        serde_json::Number::from_f64(x).map(Value::Number).expect("finite")
    } else if x.is_nan() {
        Value::from("nan")
    } else if x > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Appends the `config_hash` and `seed` columns to every row.
    pub fn stamp(mut self, cfg: &ExperimentConfig) -> Self {
        let hash = cfg.hash();
        self.columns.push("config_hash".into());
        self.columns.push("seed".into());
        for row in &mut self.rows {
            row.push(Value::from(hash.clone()));
            row.push(Value::from(cfg.seed));
        }
        self
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let fail = |e: csv::Error| CliError::Failed(format!("csv: {e}"));
        w.write_record(&self.columns).map_err(fail)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Failed(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().cloned()).collect();
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("json");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => Ok(self.to_json()),
            Format::Text => Err(CliError::config("text format is only available for gen")),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Writes `text` to `out`, or stdout when `out` is `None`. Files are
/// written to a sibling temporary and renamed, so a failure never leaves
/// a partial file behind.
pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let name = path
                .file_name()
                .ok_or_else(|| CliError::config(format!("bad output path {}", path.display())))?;
            let mut tmp_name = name.to_os_string();
            tmp_name.push(".partial");
            let tmp = path.with_file_name(tmp_name);
            std::fs::write(&tmp, text)?;
            if let Err(e) = std::fs::rename(&tmp, path) {
                let _ = std::fs::remove_file(&tmp);
                return Err(e.into());
            }
        }
    }
    Ok(())
}
