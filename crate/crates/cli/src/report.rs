use std::collections::BTreeMap;
use std::io::Write;

use hadamard_weak::Witness64;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Experiment, ResolvedConfig};
use crate::error::{input, CliError};

/// Flat table written in CSV mode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// One row per record, one column per header key of the record's JSON
    /// object. Missing keys give empty cells.
    pub fn from_records<R: Serialize>(header: &[&str], records: &[R]) -> Result<Self, CliError> {
        let mut table = Self::new(header);
        for r in records {
            let v = to_value(r)?;
            table.push(header.iter().map(|k| v.get(*k).map(cell).unwrap_or_default()).collect());
        }
        Ok(table)
    }
}

/// Text of a CSV cell: numbers and strings verbatim, anything else as
/// compact JSON.
pub fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

pub fn to_value<S: Serialize + ?Sized>(s: &S) -> Result<Value, CliError> {
    serde_json::to_value(s).map_err(|e| input(format!("serialization failed: {e}")))
}

/// What an experiment produced, before it is tied to its config.
#[derive(Debug, Default)]
pub struct Outcome {
    pub verdict: Value,
    pub traces: Value,
    pub witnesses: Vec<Witness64>,
    pub mismatches: Vec<Value>,
    pub summary: BTreeMap<String, Value>,
    pub table: Table,
    /// A verified counterexample the experiment did not expect.
    pub unexpected: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> u8 {
        u8::from(self.unexpected)
    }
}

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub experiment: Experiment,
    pub exit_code: u8,
    pub summary: BTreeMap<String, Value>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub config: ResolvedConfig,
    pub verdict: Value,
    pub traces: Value,
    pub witnesses: Vec<Witness64>,
    pub mismatches: Vec<Value>,
    pub metadata: Metadata,
    #[serde(skip)]
    pub table: Table,
}

impl Report {
    pub fn new(config: ResolvedConfig, outcome: Outcome) -> Self {
        let exit_code = outcome.exit_code();
        Self {
            metadata: Metadata {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                experiment: config.experiment,
                exit_code,
                summary: outcome.summary,
            },
            config,
            verdict: outcome.verdict,
            traces: outcome.traces,
            witnesses: outcome.witnesses,
            mismatches: outcome.mismatches,
            table: outcome.table,
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.metadata.exit_code
    }

    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> std::io::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.table.header)?;
        for row in &self.table.rows {
            out.write_record(row)?;
        }
        out.flush()
    }
}
