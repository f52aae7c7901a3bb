//! Report envelope and the text rendering of JSON reports.

use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt::Write;

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub guard_horizon: u64,
    pub route: String,
    pub precision_eps: Option<String>,
    pub output: String,
}

/// Wraps command-specific fields with the tool version and resolved config.
pub fn envelope(command: &str, config: &RunConfig, body: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("tool".into(), json!(env!("CARGO_PKG_NAME")));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    m.extend(body);
    Value::Object(m)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| matches!(x, Value::Number(_) | Value::String(_))) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        render(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                match scalar(x) {
                    Some(s) => writeln!(out, "{pad}- {s}").unwrap(),
                    None => {
                        writeln!(out, "{pad}-").unwrap();
                        render(out, x, indent + 1);
                    }
                }
            }
        }
        x => writeln!(out, "{pad}{}", scalar(x).unwrap()).unwrap(),
    }
}

pub fn to_text(v: &Value) -> String {
    let mut out = String::new();
    render(&mut out, v, 0);
    out
}
