//! Deterministic CSV/JSON emission and atomic file output.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Twelve significant digits in scientific notation.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.11e}")
}

/// `x` rounded to twelve significant digits, for JSON numbers.
pub fn round12(x: f64) -> Value {
    let r: f64 = fmt12(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

/// A rectangular table; cells are pre-formatted for CSV and typed for JSON.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt12(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => round12(*x),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl Table {
    pub fn csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// JSON document with a config echo and the rows.
pub fn json_document(config: &impl Serialize, rows: Value) -> String {
    let doc = serde_json::json!({ "config": config, "rows": rows });
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// Writes to `path` through a temporary sibling and a rename, or to stdout.
pub fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    let Some(path) = path else {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes())?;
        return out.flush();
    };
    let name = path.file_name().ok_or_else(|| {
        io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name")
    })?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.tmp", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = fs::File::create(&tmp).and_then(|mut f| {
        f.write_all(text.as_bytes())?;
        f.sync_all()
    });
    match result.and_then(|_| fs::rename(&tmp, path)) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(0.629975), "6.29975000000e-1");
        assert_eq!(fmt12(-1.0 / 3.0), "-3.33333333333e-1");
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(round12(1.0 / 3.0), serde_json::json!(0.333333333333));
    }

    #[test]
    fn csv_layout() {
        let t = Table {
            columns: vec!["a", "b"],
            rows: vec![vec![Cell::Num(1.0), Cell::Text("x".into())]],
        };
        assert_eq!(t.csv(), "a,b\n1.00000000000e0,x\n");
        assert_eq!(t.json_rows(), serde_json::json!([{ "a": 1.0, "b": "x" }]));
    }
}
