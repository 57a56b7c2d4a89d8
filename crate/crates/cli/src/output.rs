//! Shared formatting. Rust's `Display` for `f64` is the shortest decimal
//! that round-trips, which is what every numeric field uses.

use std::io::Write;

use serde_json::{json, Value};

use crate::error::CliResult;

pub fn num(x: f64) -> String {
    x.to_string()
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(String::new, num)
}

/// JSON number, with non-finite values spelled out as strings.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(num(x))
    }
}

pub fn jopt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, jnum)
}

pub fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_json(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(trunclc::Error::from)?;
    writeln!(out)?;
    Ok(())
}
