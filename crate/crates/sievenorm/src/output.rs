//! `OutputRecord` and its CSV and JSON renderings.
//!
//! Floats are rounded to 12 significant digits when the record is built, so
//! the two renderings carry the same values and JSON re-parses to an equal
//! record.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::row::ExperimentRow;

pub const SCHEMA_VERSION: u32 = 1;

/// Column order of the CSV rendering.
pub const CSV_HEADER: [&str; 15] = [
    "experiment",
    "check",
    "n",
    "p",
    "q",
    "m",
    "seed",
    "measured",
    "reference",
    "ratio",
    "pass",
    "converged",
    "runtime_ms",
    "extras",
    "note",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub workers: usize,
    pub settings: BTreeMap<String, f64>,
    pub seeds: Vec<u64>,
    /// Wall-clock start, omitted under `--no-timing`.
    pub started_unix_ms: Option<u64>,
    pub elapsed_ms: Option<f64>,
}

impl Metadata {
    pub fn new(command: impl Into<String>, workers: usize) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.into(),
            workers,
            settings: BTreeMap::new(),
            seeds: Vec::new(),
            started_unix_ms: None,
            elapsed_ms: None,
        }
    }

    pub fn stamp_now(&mut self) {
        self.started_unix_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_millis() as u64);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: u32,
    pub metadata: Metadata,
    pub rows: Vec<ExperimentRow>,
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn fmt_float(x: f64) -> String {
    format!("{:?}", round12(x))
}

fn fmt_opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl OutputRecord {
    pub fn new(mut metadata: Metadata, mut rows: Vec<ExperimentRow>) -> Self {
        for v in metadata.settings.values_mut() {
            *v = round12(*v);
        }
        metadata.elapsed_ms = metadata.elapsed_ms.map(round12);
        for r in &mut rows {
            r.measured = round12(r.measured);
            r.reference = r.reference.map(round12);
            r.ratio = r.ratio.map(round12);
            r.runtime_ms = round12(r.runtime_ms);
            for v in r.extras.values_mut() {
                *v = round12(*v);
            }
        }
        Self {
            schema_version: SCHEMA_VERSION,
            metadata,
            rows,
        }
    }

    /// Zeroes every runtime and drops timestamps, for byte-stable output.
    pub fn strip_timing(&mut self) {
        self.metadata.started_unix_ms = None;
        self.metadata.elapsed_ms = None;
        for r in &mut self.rows {
            r.runtime_ms = 0.0;
        }
    }

    pub fn has_violation(&self) -> bool {
        self.rows.iter().any(ExperimentRow::is_violation)
    }

    pub fn has_error(&self) -> bool {
        self.rows
            .iter()
            .any(|r| r.check == crate::row::CheckKind::Error)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let extras = r
                .extras
                .iter()
                .map(|(k, v)| format!("{k}={}", fmt_float(*v)))
                .collect::<Vec<_>>()
                .join(";");
            w.write_record([
                r.experiment.clone(),
                r.check.name().to_string(),
                fmt_opt(r.n),
                fmt_opt(r.p),
                fmt_opt(r.q),
                fmt_opt(r.m),
                fmt_opt(r.seed),
                fmt_float(r.measured),
                r.reference.map(fmt_float).unwrap_or_default(),
                r.ratio.map(fmt_float).unwrap_or_default(),
                r.pass.to_string(),
                fmt_opt(r.converged),
                fmt_float(r.runtime_ms),
                extras,
                r.note.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::row::CheckKind;

    #[test]
    fn rounding() {
        assert_eq!(round12(0.1), 0.1);
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(123456789012345.0), 123456789012000.0);
        assert_eq!(fmt_float(2.0), "2.0");
    }

    #[test]
    fn violations_and_timing() {
        let ok = ExperimentRow::new("a", CheckKind::Invariant, 1.0).pass_if(true);
        let bad = ExperimentRow::new("b", CheckKind::Invariant, 2.0);
        let soft = ExperimentRow::new("c", CheckKind::Empirical, 0.0);
        let mut rec = OutputRecord::new(Metadata::new("t", 1), vec![ok.clone(), soft]);
        assert!(!rec.has_violation() && !rec.has_error());
        rec.rows.push(bad);
        assert!(rec.has_violation());
        rec.rows.push(ExperimentRow::error("d", None, "boom"));
        assert!(rec.has_error());
        rec.metadata.stamp_now();
        rec.rows[0].runtime_ms = 5.0;
        rec.strip_timing();
        assert_eq!(rec.metadata.started_unix_ms, None);
        assert!(rec.rows.iter().all(|r| r.runtime_ms == 0.0));
    }

    #[test]
    fn csv_shape() {
        let row = ExperimentRow::new("demo", CheckKind::Invariant, 1.0 / 3.0)
            .n(16)
            .against(1.0)
            .extra("grid_34", 0.5)
            .pass_if(true)
            .note("a, b");
        let rec = OutputRecord::new(Metadata::new("test", 1), vec![row]);
        let csv = rec.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "demo,invariant,16,,,,,0.333333333333,1.0,0.333333333333,true,,0.0,grid_34=0.5,\"a, b\""
        );
    }
}
