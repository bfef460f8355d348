use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::Rule;
use crate::syntax::{print_stack, print_term, Process};

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Stuck,
    Budget,
    /// The last entry equals entry `entry`; the cycle has length `period`.
    Cycle { entry: usize, period: usize },
    /// Watcher number `watcher` accepted entry `index`.
    Watcher { watcher: usize, index: usize },
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Stuck => f.write_str("stuck"),
            Status::Budget => f.write_str("budget"),
            Status::Cycle { entry, period } => write!(f, "cycle(entry {entry}, period {period})"),
            Status::Watcher { watcher, index } => {
                write!(f, "watcher-hit(watcher {watcher}, index {index})")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceEntry {
    pub process: Process,
    /// The rule that produced this entry; `None` for the first one.
    pub rule: Option<Rule>,
}

/// The processes visited by a run, in order, and how the run ended.
#[derive(Clone, Debug)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub status: Status,
}

impl Trace {
    pub(crate) fn new(entries: Vec<TraceEntry>, status: Status) -> Self {
        Trace { entries, status }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of machine steps performed.
    pub fn steps(&self) -> usize {
        self.entries.len().saturating_sub(1)
    }

    pub fn last(&self) -> &Process {
        &self.entries.last().expect("a trace is never empty").process
    }

    pub fn processes(&self) -> impl Iterator<Item = &Process> {
        self.entries.iter().map(|e| &e.process)
    }

    pub fn contains(&self, p: &Process) -> bool {
        self.processes().any(|q| q == p)
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.entries.iter().filter_map(|e| e.rule.as_ref())
    }

    /// One `step N: <term> * <stack>` line per entry, then the status.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, e) in self.entries.iter().enumerate() {
            out.push_str(&format!("step {i}: {}\n", e.process));
        }
        out.push_str(&format!("status: {}\n", self.status));
        out
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| {
                json!({
                    "step": i,
                    "head": print_term(&e.process.head),
                    "stack": print_stack(&e.process.stack),
                    "rule": e.rule.as_ref().map(|r| r.to_string()),
                })
            })
            .collect();
        json!({ "trace": steps, "status": self.status })
    }
}
