use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

use crate::manifest::RunManifest;

/// Rounds to 12 significant digits so serialized payloads are stable.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - magnitude);
    (x * scale).round() / scale
}

fn round_tree(value: Value) -> Value {
    match value {
        Value::Number(n) => {
            if n.is_f64() {
                let rounded = round_sig(n.as_f64().unwrap());
                serde_json::Number::from_f64(rounded)
                    .map(Value::Number)
                    .unwrap_or(Value::Null)
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_tree).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_tree(v))).collect())
        }
        other => other,
    }
}

/// Renders a report as pretty JSON with all floats at 12 significant digits.
pub fn render_json<T: Serialize>(report: &T) -> Result<String> {
    let value = serde_json::to_value(report).context("serializing report")?;
    let rounded = round_tree(value);
    Ok(serde_json::to_string_pretty(&rounded)?)
}

/// Fixed-width float rendering for CSV cells: 12 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// Writes the report (and optional CSV) plus the manifest into the output
/// directory, creating it when needed.
pub fn write_outputs(
    dir: &Path,
    report_json: &str,
    csv: Option<&str>,
    manifest: &RunManifest,
) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("report.json"), report_json.as_bytes())?;
    if let Some(rows) = csv {
        fs::write(dir.join("rows.csv"), rows.as_bytes())?;
    }
    fs::write(dir.join("manifest.json"), manifest.to_json().as_bytes())?;
    Ok(())
}
