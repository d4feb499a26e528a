//! JSON run reports and their plain-text rendering.

use serde::Serialize;
use serde_json::{Map, Value};

/// Fields of one run. Keys serialize in sorted order, so reruns produce identical bytes
/// apart from `elapsed_ns`.
#[derive(Default)]
pub struct Report {
    fields: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        let mut r = Report::default();
        r.set("command", command);
        r
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Report {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.fields.insert(key.to_owned(), v);
        self
    }

    pub fn into_value(self) -> Value {
        Value::Object(self.fields)
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Human-readable rendering: `key: value` lines, with arrays of objects drawn as tables.
pub fn pretty(v: &Value) -> String {
    let Value::Object(map) = v else { return scalar(v) };
    let mut out = String::new();
    let mut tables = Vec::new();
    for (k, v) in map {
        match v {
            Value::Array(rows) if rows.first().is_some_and(Value::is_object) => tables.push((k, rows)),
            Value::Object(_) => out.push_str(&format!("{k}: {v}\n")),
            _ => out.push_str(&format!("{k}: {}\n", scalar(v))),
        }
    }
    for (name, rows) in tables {
        out.push_str(&format!("\n{name}:\n"));
        out.push_str(&table(rows));
    }
    out
}

fn table(rows: &[Value]) -> String {
    let mut header: Vec<&str> = Vec::new();
    for row in rows {
        for k in row.as_object().into_iter().flat_map(|o| o.keys()) {
            if !header.contains(&k.as_str()) {
                header.push(k);
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| header.iter().map(|h| row.get(h).map_or_else(|| "-".into(), scalar)).collect())
        .collect();
    let widths: Vec<usize> = header
        .iter()
        .enumerate()
        .map(|(i, h)| cells.iter().map(|c| c[i].len()).chain([h.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: Vec<&str>| -> String {
        let padded: Vec<String> = items.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        padded.join("  ").trim_end().to_owned() + "\n"
    };
    let mut out = line(header.clone());
    for c in &cells {
        out.push_str(&line(c.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pretty_renders_tables() {
        let v = json!({"command": "bench", "rows": [{"n": 8, "t": 1}, {"n": 16, "t": 20}]});
        let s = pretty(&v);
        assert!(s.contains("command: bench"));
        assert!(s.contains(" n   t\n"));
        assert!(s.contains("16  20\n"));
    }
}
