//! Deterministic CSV/JSON writers. Every document starts with the run header:
//! `# key=value` comment lines for CSV, a `config` object for JSON.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Ordered `(key, value)` pairs describing a run.
#[derive(Debug, Clone)]
pub struct Header(Vec<(String, String)>);

impl Header {
    pub fn new(command: &str) -> Self {
        Header(vec![
            ("tool".into(), format!("dlshor {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), command.into()),
        ])
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.push((key.into(), value.to_string()));
        self
    }

    fn json(&self) -> Value {
        Value::Object(
            self.0
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect(),
        )
    }
}

pub fn csv_rows<T: Serialize>(header: &Header, rows: &[T]) -> Result<String, String> {
    let mut out = String::new();
    for (k, v) in &header.0 {
        out.push_str(&format!("# {k}={v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| e.to_string())?;
    }
    let body = w.into_inner().map_err(|e| e.to_string())?;
    out.push_str(&String::from_utf8(body).map_err(|e| e.to_string())?);
    Ok(out)
}

/// `{"config": …, <fields of payload>}` for an object payload, otherwise
/// `{"config": …, "rows": payload}`.
pub fn json_doc<T: Serialize>(header: &Header, payload: &T) -> Result<String, String> {
    let value = serde_json::to_value(payload).map_err(|e| e.to_string())?;
    let mut doc = Map::new();
    doc.insert("config".into(), header.json());
    match value {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("rows".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(doc)).map_err(|e| e.to_string())?;
    text.push('\n');
    Ok(text)
}

pub fn rows<T: Serialize>(header: &Header, format: Format, rows: &[T]) -> Result<String, String> {
    match format {
        Format::Csv => csv_rows(header, rows),
        Format::Json => json_doc(header, &rows),
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
