use serde_json::{Map, Value};

use crate::config::Format;

/// Metadata lines followed by an optional table.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub meta: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.meta.push((key.into(), value.into()));
        self
    }

    pub fn table(&mut self, columns: &[&'static str]) -> &mut Self {
        self.columns = columns.to_vec();
        self
    }

    pub fn row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// `# key = value` lines.
    pub fn meta_text(&self) -> String {
        self.meta
            .iter()
            .map(|(k, v)| format!("# {k} = {}\n", plain(v)))
            .collect()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.meta_text();
                if !self.columns.is_empty() {
                    out.push_str(&self.columns.join(","));
                    out.push('\n');
                    for row in &self.rows {
                        let cells: Vec<String> = row.iter().map(plain).collect();
                        out.push_str(&cells.join(","));
                        out.push('\n');
                    }
                }
                out
            }
            Format::JsonLines => {
                let mut out = String::new();
                let meta: Map<String, Value> = self.meta.iter().cloned().collect();
                out.push_str(&Value::Object(meta).to_string());
                out.push('\n');
                for row in &self.rows {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .map(|c| c.to_string())
                        .zip(row.iter().cloned())
                        .collect();
                    out.push_str(&Value::Object(obj).to_string());
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
