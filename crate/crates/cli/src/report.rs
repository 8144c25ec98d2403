//! Report envelope and JSON / CSV emission.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use crate::commands::CliError;

/// Bumped whenever a payload field is renamed, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub edge_count: usize,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub params: Value,
    pub graph: Option<GraphSummary>,
    pub payload: Value,
    /// Wall-clock time of the command itself, excluding I/O.
    pub timing_ms: f64,
}

/// A flat view of part of the payload for CSV output.
#[derive(Debug)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, header: Vec<&'static str>) -> Self {
        Self {
            name,
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Two-column `key,value` table.
    pub fn summary(pairs: Vec<(&str, String)>) -> Self {
        let mut t = Self::new("summary", vec!["key", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.to_string(), v]);
        }
        t
    }
}

/// Same text as the JSON serializer: the shortest form that parses back to
/// the same `f64`.
pub fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("float serializes")
}

pub fn join_ids(set: &[usize]) -> String {
    set.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub struct Output {
    pub report: Report,
    /// First table is the default for CSV.
    pub tables: Vec<Table>,
}

impl Output {
    pub fn write(
        &self,
        format: Format,
        table: Option<&str>,
        out: &mut dyn Write,
    ) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.report)
                    .map_err(|e| CliError::input(format!("writing JSON: {e}")))?;
                writeln!(out)?;
            }
            Format::Csv => {
                let chosen = match table {
                    None => self.tables.first(),
                    Some(name) => self.tables.iter().find(|t| t.name == name),
                };
                let Some(t) = chosen else {
                    let names: Vec<&str> = self.tables.iter().map(|t| t.name).collect();
                    return Err(CliError::input(format!(
                        "no CSV table {:?} for {}; available: {}",
                        table.unwrap_or(""),
                        self.report.command,
                        names.join(", ")
                    )));
                };
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&t.header).map_err(csv_err)?;
                for row in &t.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::input(format!("writing CSV: {e}"))
}
