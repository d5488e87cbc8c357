//! Report document and its text/json renderings.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

/// One command's output: a flat object with `command`, `inputs`, `result`,
/// `diagnostics` and `warnings`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub result: Map<String, Value>,
    pub diagnostics: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            result: Map::new(),
            diagnostics: Map::new(),
            warnings: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), to_value(value));
        self
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.result.insert(key.to_string(), to_value(value));
        self
    }

    pub fn diagnostic(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.diagnostics.insert(key.to_string(), to_value(value));
        self
    }

    pub fn warn(&mut self, message: impl Into<String>) -> &mut Self {
        self.warnings.push(message.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            // serde_json writes the shortest decimal that parses back to
            // the same binary64, so every number round-trips exactly
            Format::Json => serde_json::to_string_pretty(self).expect("report is valid json") + "\n",
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for (title, section) in [
            ("inputs", &self.inputs),
            ("result", &self.result),
            ("diagnostics", &self.diagnostics),
        ] {
            if section.is_empty() {
                continue;
            }
            out.push_str(&format!("{title}:\n"));
            for (key, value) in section {
                write_text(&mut out, key, value, 1);
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}

fn write_text(out: &mut String, key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                write_text(out, k, v, depth + 1);
            }
        }
        Value::Number(n) => match n.as_f64() {
            Some(f) if !(n.is_i64() || n.is_u64()) => {
                out.push_str(&format!("{pad}{key}: {}\n", format_float(f)))
            }
            _ => out.push_str(&format!("{pad}{key}: {n}\n")),
        },
        Value::Array(items) => {
            let parts: Vec<String> = items
                .iter()
                .map(|v| match v.as_f64() {
                    Some(f) => format_float(f),
                    None => v.to_string(),
                })
                .collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", parts.join(", ")));
        }
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}

/// 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Error document written to standard error.
pub fn render_error(kind: &str, message: &str, format: Format) -> String {
    match format {
        Format::Json => {
            let doc = serde_json::json!({ "error": { "kind": kind, "message": message } });
            serde_json::to_string(&doc).expect("error is valid json") + "\n"
        }
        Format::Text => format!("error ({kind}): {message}\n"),
    }
}
