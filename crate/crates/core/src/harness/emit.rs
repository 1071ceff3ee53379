use std::path::Path;

use serde_json::Value;

use super::config::Format;
use super::pipeline::{column_names, Record};
use crate::error::{Error, Result};

/// Pretty JSON array of records, one object per sweep point.
pub fn to_json(records: &[Record]) -> String {
    let rows: Vec<Value> = records.iter().map(|r| Value::Object(r.columns())).collect();
    let mut text = serde_json::to_string_pretty(&rows).unwrap_or_else(|_| "[]".into());
    text.push('\n');
    text
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// CSV with a fixed header; empty record lists give the header alone.
pub fn to_csv(records: &[Record]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::config(format!("csv encoding failed: {e}"));
    w.write_record(column_names()).map_err(csv_err)?;
    for r in records {
        w.write_record(r.columns().values().map(cell)).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::config(e.to_string()))
}

pub fn render(records: &[Record], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(to_json(records)),
        Format::Csv => to_csv(records),
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| Error::Io {
        context: format!("writing {}", path.display()),
        source,
    })
}

pub fn emit(records: &[Record], format: Format, path: &Path) -> Result<()> {
    write_text(path, &render(records, format)?)
}
