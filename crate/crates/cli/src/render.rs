//! Text, JSON and CSV rendering of command results.

use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A command result: the JSON document plus a flat table for CSV and text.
pub struct Output {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Free-form lines appended to text output.
    pub notes: Vec<String>,
}

impl Output {
    /// Single-record output; the table is the record's top-level fields.
    pub fn record(json: Value, fields: &[&'static str]) -> Output {
        let row = fields.iter().map(|f| cell(&json[*f])).collect();
        Output {
            json,
            header: fields.to_vec(),
            rows: vec![row],
            notes: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("serializable") + "\n",
            Format::Csv => {
                let mut out = self.header.join(",") + "\n";
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_escape(c)).collect();
                    out += &(cells.join(",") + "\n");
                }
                out
            }
            Format::Text => {
                let mut out = if self.rows.len() == 1 {
                    self.header
                        .iter()
                        .zip(&self.rows[0])
                        .filter(|(_, c)| !c.is_empty())
                        .map(|(h, c)| format!("{h}: {c}\n"))
                        .collect()
                } else {
                    aligned(&self.header, &self.rows)
                };
                for note in &self.notes {
                    out += note;
                    out.push('\n');
                }
                out
            }
        }
    }
}

pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn csv_escape(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn aligned(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|k| {
            rows.iter()
                .map(|r| r[k].chars().count())
                .chain([header[k].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn formats() {
        let out = Output::record(
            json!({"trivial": true, "word": "a1^3"}),
            &["word", "trivial"],
        );
        assert_eq!(out.render(Format::Text), "word: a1^3\ntrivial: true\n");
        assert_eq!(out.render(Format::Csv), "word,trivial\na1^3,true\n");
        assert!(out.render(Format::Json).contains("\"trivial\": true"));
        assert_eq!(csv_escape("a,b"), "\"a,b\"");
    }
}
