use std::io::Write;
use std::path::Path;

use serde_json::{Number, Value};
use tempfile::NamedTempFile;

use crate::error::CliError;

/// Tolerance and error-magnitude keys, left unrounded.
const RAW_KEYS: [&str; 4] = ["tol", "residual", "error", "gap"];

/// Rounds every float to `decimals` places and folds `-0` into `0`.
pub fn round_value(value: &mut Value, decimals: Option<i32>) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r = match decimals {
                Some(d) => round(x, d),
                None => x,
            };
            let r = if r == 0.0 { 0.0 } else { r };
            if let Some(num) = Number::from_f64(r) {
                *n = num;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_value(v, decimals)),
        Value::Object(map) => {
            for (key, v) in map.iter_mut() {
                let d = if RAW_KEYS.contains(&key.as_str()) {
                    None
                } else {
                    decimals
                };
                round_value(v, d);
            }
        }
        _ => {}
    }
}

pub fn round(x: f64, decimals: i32) -> f64 {
    let f = 10f64.powi(decimals);
    let r = (x * f).round() / f;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn format_float(x: f64, decimals: Option<i32>) -> String {
    match decimals {
        Some(d) => format!("{:.*}", d as usize, round(x, d)),
        None => {
            let x = if x == 0.0 { 0.0 } else { x };
            format!("{x:?}")
        }
    }
}

/// CSV text from a header and rows of already formatted cells.
pub fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let write = |e: csv::Error| CliError::Write(e.to_string());
    writer.write_record(header).map_err(write)?;
    for row in rows {
        writer.write_record(row).map_err(write)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Write(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Write(e.to_string()))
}

/// Writes to `path` through a temporary file in the same directory, or to
/// standard output when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let write = |e: std::io::Error| CliError::Write(e.to_string());
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(write)?;
            stdout.flush().map_err(write)
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = NamedTempFile::new_in(dir).map_err(write)?;
            tmp.write_all(text.as_bytes()).map_err(write)?;
            tmp.as_file().sync_all().map_err(write)?;
            tmp.persist(path).map_err(|e| write(e.error))?;
            Ok(())
        }
    }
}
