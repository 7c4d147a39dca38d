//! Rendering of command results as JSON or CSV.

use serde_json::Value;

use crate::config::Format;

/// A command result: a JSON document plus an optional tabular view used for
/// CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub table: Option<Table>,
}

/// Header and rows of a CSV view.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

impl Report {
    /// A single value, printed bare in either format.
    pub fn scalar(v: impl ToString) -> Self {
        let s = v.to_string();
        let json = s.parse::<serde_json::Number>().map(Value::Number).unwrap_or(Value::String(s.clone()));
        let mut t = Table::new(&["value"]);
        t.push(vec![s]);
        Report { json, table: Some(t) }
    }

    pub fn new(json: Value, table: Table) -> Self {
        Report { json, table: Some(table) }
    }

    /// Renders the report; scalars print without decoration.
    pub fn render(&self, format: Format) -> String {
        if let Some(t) = &self.table {
            if t.header == ["value"] && t.rows.len() == 1 && !self.json.is_object() && !self.json.is_array() {
                return format!("{}\n", t.rows[0][0]);
            }
        }
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let t = self.table.as_ref().expect("every report carries a table");
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                w.write_record(&t.header).expect("in-memory write");
                for row in &t.rows {
                    w.write_record(row).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 records")
            }
        }
    }
}
