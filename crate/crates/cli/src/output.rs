//! Rendering of the result document.

use num::BigRational;
use serde_json::{json, Map, Value};
use thoma_core::young::rational_to_f64;

use crate::Mode;

pub const SCHEMA: &str = "thoma-lab/1";

/// Number formatting shared by every command.
#[derive(Clone, Copy, Debug)]
pub struct Numbers {
    pub mode: Mode,
}

impl Numbers {
    /// `"p/q"` in exact mode, a JSON number in float mode.
    pub fn rational(&self, q: &BigRational) -> Value {
        match self.mode {
            Mode::Exact => Value::String(q.to_string()),
            Mode::Float => json!(rational_to_f64(q)),
        }
    }

    pub fn rationals(&self, qs: &[BigRational]) -> Value {
        Value::Array(qs.iter().map(|q| self.rational(q)).collect())
    }
}

/// Plain `f64` values; non-finite ones become strings so the document stays
/// valid JSON.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(x.to_string())
    }
}

pub fn document(command: &str, passed: bool, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "passed": passed,
        "result": result,
    })
}

/// Two-column `path  value` table of every leaf of the document.
pub fn table(doc: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", doc, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) => flatten_map(map, &join, rows),
        Value::Array(items) if items.iter().any(|v| v.is_object() || v.is_array()) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), item, rows);
            }
        }
        Value::Array(items) => {
            let text: Vec<String> = items.iter().map(scalar).collect();
            rows.push((prefix.to_string(), text.join(", ")));
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn flatten_map(map: &Map<String, Value>, join: &dyn Fn(&str) -> String, rows: &mut Vec<(String, String)>) {
    for (k, v) in map {
        flatten(&join(k), v, rows);
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}
