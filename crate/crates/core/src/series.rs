//! Indexed numeric series with optional witness blocks.

use std::fmt::Write as _;

use serde::Serialize;

use crate::words::Block;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesEntry {
    pub n: usize,
    pub value: f64,
    #[serde(rename = "witness_block", skip_serializing_if = "Option::is_none")]
    pub witness: Option<Block>,
}

/// A finite series `n ↦ value`, e.g. `(1/n) log₂ |𝓛_n|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub entries: Vec<SeriesEntry>,
}

impl Series {
    pub fn new(name: impl Into<String>) -> Self {
        Series {
            name: name.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, n: usize, value: f64, witness: Option<Block>) {
        self.entries.push(SeriesEntry { n, value, witness });
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.n == n).map(|e| e.value)
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn last(&self) -> Option<&SeriesEntry> {
        self.entries.last()
    }

    /// CSV with header `n,value,witness_block`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,value,witness_block\n");
        for e in &self.entries {
            let witness = e.witness.as_ref().map(Block::to_string).unwrap_or_default();
            writeln!(out, "{},{},{}", e.n, e.value, witness).expect("write to string");
        }
        out
    }
}
