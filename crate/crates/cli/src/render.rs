//! Plain-text rendering of a report wrapper.

use serde_json::Value;

fn field<'a>(v: &'a Value, k: &str) -> &'a Value {
    v.get(k).unwrap_or(&Value::Null)
}

fn text(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn identity_row(r: &Value) -> String {
    format!(
        "{:<14} dim={:<3} m={:<2} L={:<10} route={:<13} lambda={:<8} ratio={:<6} residuals={:<3} {}",
        text(field(r, "identity")),
        text(field(r, "fiber_dim")),
        text(field(r, "m")),
        text(field(r, "l_variant")),
        text(field(r, "route")),
        text(field(r, "lambda")),
        text(field(r, "paper_ratio")),
        field(r, "residuals").as_array().map_or(0, Vec::len),
        text(field(r, "status")),
    )
}

fn numeric_row(r: &Value) -> String {
    format!(
        "{:<14} samples={:<3} max_residual={:.3e} tol={:.1e} {}",
        text(field(r, "law")),
        field(r, "samples").as_array().map_or(0, Vec::len),
        field(r, "max_residual").as_f64().unwrap_or(f64::NAN),
        field(r, "tolerance").as_f64().unwrap_or(f64::NAN),
        text(field(r, "status")),
    )
}

pub fn table(report: &Value) -> String {
    let mut out = String::new();
    let results = field(report, "results").as_array().cloned().unwrap_or_default();
    for r in &results {
        let line = if r.get("identity").is_some() {
            identity_row(r)
        } else if r.get("law").is_some() {
            numeric_row(r)
        } else if let Some(d) = r.get("display").and_then(Value::as_str) {
            d.to_string()
        } else {
            r.to_string()
        };
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
