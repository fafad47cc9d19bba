use serde_json::{json, Map, Value};

use crate::params::Format;
use crate::CliError;

/// A finished run: the effective configuration, a flat table for CSV and a
/// structured result for JSON.
pub struct Report {
    pub command: &'static str,
    pub config: Map<String, Value>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub result: Value,
}

impl Report {
    pub fn new(command: &'static str, header: &[&'static str]) -> Self {
        Report {
            command,
            config: Map::new(),
            header: header.to_vec(),
            rows: Vec::new(),
            result: Value::Null,
        }
    }

    pub fn echo(&mut self, key: &str, value: impl Into<Value>) {
        self.config.insert(key.to_string(), value.into());
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(runtime)?;
                for r in &self.rows {
                    w.write_record(r).map_err(runtime)?;
                }
                w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))
            }
            Format::Json => {
                let doc = json!({
                    "artifact_version": env!("CARGO_PKG_VERSION"),
                    "command": self.command,
                    "config": self.config,
                    "result": self.result,
                });
                let mut out = serde_json::to_vec_pretty(&doc).map_err(runtime)?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Shortest text that round-trips the float.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn join(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(";")
}
