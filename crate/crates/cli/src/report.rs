//! The JSON report envelope shared by every command.

use serde::Serialize;
use serde_json::{json, Value};
use towergroup::Limits;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: Vec<String>,
    pub limits: Value,
    /// `special`, `not_special`, `inconclusive`, `isoclinic`,
    /// `not_isoclinic`, or null for purely descriptive commands.
    pub verdict: Option<String>,
    pub result: Value,
    pub error: Option<Value>,
    /// Excluded from determinism comparisons.
    pub timing: Value,
}

pub fn limits_json(limits: &Limits) -> Value {
    json!({
        "max_order": limits.max_order,
        "search_limit": limits.search_limit,
        "search_nodes": limits.search_nodes,
        "max_normal_subgroups": limits.max_normal_subgroups,
        "exhaustive_cover_order": limits.exhaustive_cover_order.to_string(),
        "sample_pairs": limits.sample_pairs,
        "sample_seed": limits.sample_seed,
    })
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// The report with the timing field removed, for byte comparisons.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        v
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let v = serde_json::to_value(self).expect("reports serialize");
        render(&v, 0, &mut out);
        out
    }
}

/// Drops the `timing` member from a serialized report.
pub fn strip_timing(json_text: &str) -> Option<String> {
    let mut v: Value = serde_json::from_str(json_text).ok()?;
    v.as_object_mut()?.remove("timing");
    serde_json::to_string_pretty(&v).ok()
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => Some(
            items
                .iter()
                .map(|x| scalar(x).unwrap())
                .collect::<Vec<_>>()
                .join(", "),
        ),
        _ => None,
    }
}

fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render(x, indent + 1, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap())),
    }
}
