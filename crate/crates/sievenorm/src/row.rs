//! The result row shared by every experiment and command.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// How a row's pass flag should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Must hold at every scale; a failure is a bug.
    Invariant,
    /// Compared against a configured floor or a trend; a failure is a finding.
    Empirical,
    /// Recorded for context; always passes.
    Record,
    /// The experiment could not run (bad parameters, capacity).
    Error,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Invariant => "invariant",
            CheckKind::Empirical => "empirical",
            CheckKind::Record => "record",
            CheckKind::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub experiment: String,
    pub check: CheckKind,
    pub n: Option<u64>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub m: Option<u64>,
    pub seed: Option<u64>,
    pub measured: f64,
    pub reference: Option<f64>,
    pub ratio: Option<f64>,
    pub pass: bool,
    pub converged: Option<bool>,
    pub runtime_ms: f64,
    /// Secondary values (grid sizes, tolerances, context sums), by name.
    pub extras: BTreeMap<String, f64>,
    pub note: String,
}

impl ExperimentRow {
    pub fn new(experiment: impl Into<String>, check: CheckKind, measured: f64) -> Self {
        Self {
            experiment: experiment.into(),
            check,
            n: None,
            p: None,
            q: None,
            m: None,
            seed: None,
            measured,
            reference: None,
            ratio: None,
            pass: check == CheckKind::Record,
            converged: None,
            runtime_ms: 0.0,
            extras: BTreeMap::new(),
            note: String::new(),
        }
    }

    pub fn error(
        experiment: impl Into<String>,
        n: Option<u64>,
        message: impl std::fmt::Display,
    ) -> Self {
        let mut row = Self::new(experiment, CheckKind::Error, 0.0);
        row.n = n;
        row.note = message.to_string();
        row
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n as u64);
        self
    }

    pub fn p(mut self, p: usize) -> Self {
        self.p = Some(p as u64);
        self
    }

    pub fn q(mut self, q: usize) -> Self {
        self.q = Some(q as u64);
        self
    }

    pub fn m(mut self, m: usize) -> Self {
        self.m = Some(m as u64);
        self
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    /// Sets the reference and `measured / reference`.
    pub fn against(mut self, reference: f64) -> Self {
        self.reference = Some(reference);
        self.ratio = Some(self.measured / reference);
        self
    }

    /// Non-finite values are dropped so that every rendering can carry them.
    pub fn extra(mut self, key: &str, value: f64) -> Self {
        if value.is_finite() {
            self.extras.insert(key.to_string(), value);
        }
        self
    }

    pub fn pass_if(mut self, ok: bool) -> Self {
        self.pass = ok;
        self
    }

    pub fn converged(mut self, c: bool) -> Self {
        self.converged = Some(c);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if self.note.is_empty() {
            self.note = note;
        } else if !note.is_empty() {
            self.note = format!("{}; {}", self.note, note);
        }
        self
    }

    /// An invariant that failed.
    pub fn is_violation(&self) -> bool {
        self.check == CheckKind::Invariant && !self.pass
    }
}

/// Runs `f` and stamps its wall time on every row it returns.
pub fn timed(f: impl FnOnce() -> Vec<ExperimentRow>) -> Vec<ExperimentRow> {
    let start = Instant::now();
    let mut rows = f();
    let ms = start.elapsed().as_secs_f64() * 1e3;
    for r in &mut rows {
        r.runtime_ms = ms;
    }
    rows
}
