use serde::Serialize;
use serde_json::Value;

/// Result of one command, rendered as text or JSON.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    /// Arguments as given, without the program name.
    pub command: Vec<String>,
    /// Normalized inputs plus the effective budget and seed.
    pub inputs: Value,
    pub verdict: Value,
    pub trace: Vec<String>,
    pub certificate: Value,
    pub elapsed_ms: u64,
    pub budget_used: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = format!("command: {}\n", self.command.join(" "));
        if let Value::Object(map) = &self.inputs {
            for (k, v) in map {
                out += &format!("  {k}: {}\n", plain(v));
            }
        }
        out += &format!("verdict: {}\n", plain(&self.verdict));
        if !self.trace.is_empty() {
            out += "trace:\n";
            for line in &self.trace {
                out += &format!("  {line}\n");
            }
        }
        if !self.certificate.is_null() {
            out += "certificate:\n";
            write_value(&mut out, &self.certificate, 1);
        }
        out += &format!("elapsed: {} ms, budget used: {}\n", self.elapsed_ms, self.budget_used);
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(Value::is_object))) {
                    *out += &format!("{pad}{k}:\n");
                    write_value(out, x, depth + 1);
                } else {
                    *out += &format!("{pad}{k}: {}\n", plain(x));
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() {
                    *out += &format!("{pad}-\n");
                    write_value(out, x, depth + 1);
                } else {
                    *out += &format!("{pad}- {}\n", plain(x));
                }
            }
        }
        other => *out += &format!("{pad}{}\n", plain(other)),
    }
}
