use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// Rows for the csv and table renderers.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// `field,value` rows from a JSON report; exact rationals become `p/q`.
    pub fn from_json(value: &Value) -> Self {
        let mut t = Table::new(&["field", "value"]);
        flatten("", value, &mut t.rows);
        t
    }
}

fn is_rational(map: &serde_json::Map<String, Value>) -> bool {
    map.len() == 3 && map.contains_key("numerator") && map.contains_key("denominator") && map.contains_key("approx")
}

/// `p/q` (or `p`) for an exact rational JSON object.
pub fn rational_text(value: &Value) -> Option<String> {
    let map = value.as_object().filter(|m| is_rational(m))?;
    let num = map["numerator"].as_str()?;
    let den = map["denominator"].as_str()?;
    Some(if den == "1" {
        num.to_string()
    } else {
        format!("{num}/{den}")
    })
}

pub fn scalar_text(value: &Value) -> String {
    match value {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        other => rational_text(other).unwrap_or_else(|| other.to_string()),
    }
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<Vec<String>>) {
    let join = |key: &str| {
        if prefix.is_empty() {
            key.to_string()
        } else {
            format!("{prefix}.{key}")
        }
    };
    match value {
        Value::Object(map) if !is_rational(map) => {
            for (k, v) in map {
                flatten(&join(k), v, out);
            }
        }
        Value::Array(items) if items.is_empty() => out.push(vec![prefix.to_string(), "[]".into()]),
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        other => out.push(vec![prefix.to_string(), scalar_text(other)]),
    }
}

pub fn render(format: Format, json: &Value, table: &Table) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).expect("in-memory write");
            for row in &table.rows {
                w.write_record(row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Table => {
            let cols = table.header.len();
            let mut widths: Vec<usize> = table.header.iter().map(|h| h.chars().count()).collect();
            for row in &table.rows {
                for (i, cell) in row.iter().enumerate().take(cols) {
                    widths[i] = widths[i].max(cell.chars().count());
                }
            }
            let mut out = String::new();
            let mut line = |cells: &[String]| {
                let padded: Vec<String> = cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{c:<w$}", w = widths[i]))
                    .collect();
                let _ = writeln!(out, "{}", padded.join("  ").trim_end());
            };
            line(&table.header);
            line(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>());
            for row in &table.rows {
                line(row);
            }
            out
        }
    }
}
