//! Referees for the three games over a prenex formula: G0 on integers, G1 on
//! a single machine position plus history, and G2 where every former
//! existential position stays live.

mod abelard;
mod check;
mod g0;
mod referee;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::formula::ArithFormula;
use crate::machine::Rule;
use crate::syntax::{decode_numeral, Process, Stack, Term};

pub use abelard::{Abelard, Answer, FnAbelard, Fresh, Handle, MoveRequest, RandomAbelard, Script, ScriptMove, Scripted};
pub use check::{check_strategy, AbelardSpec, CheckReport, CheckRow};
pub use g0::{
    play_g0, BlindEloise, BoundedAbelard, G0Abelard, G0Eloise, G0Outcome, G0Position, ScriptedG0Abelard,
    ScriptedG0Eloise,
};
pub use referee::{play_g1, play_g2, MatchConfig};

/// A universal position `(m, n, u, pi)` of the history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistoryEntry {
    pub m: Vec<u64>,
    pub n: Vec<u64>,
    pub u: Term,
    pub pi: Stack,
    /// The entry this one extends; `None` for the handle.
    pub parent: Option<usize>,
}

impl HistoryEntry {
    pub fn depth(&self) -> usize {
        self.m.len()
    }

    fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n,
            "u": self.u.to_string(),
            "pi": self.pi.to_string(),
            "parent": self.parent,
        })
    }
}

/// A move Eloise can make from the current process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveEvent {
    /// The process is `u * pi` for a final entry.
    Win { entry: usize },
    /// The process is `u * m . t . pi` for a non-final entry.
    Play { entry: usize, m: u64, t: Term },
}

/// The history with an index from `u` to the entries holding it.
#[derive(Clone, Debug)]
pub struct History {
    h: usize,
    entries: Vec<HistoryEntry>,
    by_head: HashMap<Term, Vec<usize>>,
}

impl History {
    pub fn new(h: usize, u: Term, pi: Stack) -> History {
        let mut hist = History {
            h,
            entries: Vec::new(),
            by_head: HashMap::new(),
        };
        hist.push(HistoryEntry {
            m: vec![],
            n: vec![],
            u,
            pi,
            parent: None,
        });
        hist
    }

    pub fn push(&mut self, e: HistoryEntry) -> usize {
        let i = self.entries.len();
        self.by_head.entry(e.u.clone()).or_default().push(i);
        self.entries.push(e);
        i
    }

    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Extend `parent` by Eloise's `m` and Abelard's answer.
    pub fn extend(&mut self, parent: usize, m: u64, n: u64, u: Term, pi: Stack) -> usize {
        let p = &self.entries[parent];
        let (mut mv, mut nv) = (p.m.clone(), p.n.clone());
        mv.push(m);
        nv.push(n);
        self.push(HistoryEntry {
            m: mv,
            n: nv,
            u,
            pi,
            parent: Some(parent),
        })
    }

    /// Every move available at `p`, by increasing entry index.
    pub fn events(&self, p: &Process) -> Vec<MoveEvent> {
        let Some(ids) = self.by_head.get(&p.head) else {
            return Vec::new();
        };
        ids.iter()
            .filter_map(|&i| match_entry(&self.entries[i], i, self.h, p))
            .collect()
    }

    /// Moves at `p` concerning entry `i` only.
    pub fn events_for(&self, i: usize, p: &Process) -> Option<MoveEvent> {
        let e = &self.entries[i];
        (e.u == p.head).then(|| match_entry(e, i, self.h, p)).flatten()
    }

    /// The move the referee takes at `p`: the earliest winning final entry
    /// (with `f = 0`), otherwise the earliest play.
    pub fn referee_move(&self, p: &Process, phi: &ArithFormula) -> Option<MoveEvent> {
        let events = self.events(p);
        let win = events.iter().find(|ev| match ev {
            MoveEvent::Win { entry } => self.is_true(*entry, phi),
            MoveEvent::Play { .. } => false,
        });
        win.or_else(|| events.iter().find(|ev| matches!(ev, MoveEvent::Play { .. })))
            .cloned()
    }

    /// `f(m, n) = 0` at a final entry of the closed formula `phi`.
    pub fn is_true(&self, entry: usize, phi: &ArithFormula) -> bool {
        let e = &self.entries[entry];
        e.depth() == phi.h && phi.eval(&[], &e.m, &e.n).map(|v| v == 0).unwrap_or(false)
    }
}

fn match_entry(e: &HistoryEntry, i: usize, h: usize, p: &Process) -> Option<MoveEvent> {
    if e.depth() == h {
        return (p.stack == e.pi).then_some(MoveEvent::Win { entry: i });
    }
    let (args, rest) = p.stack.split(2)?;
    if rest != e.pi {
        return None;
    }
    let m = decode_numeral(&args[0])?;
    Some(MoveEvent::Play {
        entry: i,
        m,
        t: args[1].clone(),
    })
}

/// Moves available at `p` against `history` for a formula of depth `h`,
/// earliest entry first. Final entries are reported whatever `f` says.
pub fn detect_move(p: &Process, history: &[HistoryEntry], h: usize) -> Option<MoveEvent> {
    history
        .iter()
        .enumerate()
        .filter(|(_, e)| e.u == p.head)
        .find_map(|(i, e)| match_entry(e, i, h, p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Game {
    G1,
    G2,
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Game::G1 => "g1",
            Game::G2 => "g2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Reason {
    Stuck,
    /// Not definitive: a larger budget may change the verdict.
    Budget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    EloiseWin { entry: usize },
    AbelardWin { reason: Reason },
}

impl Verdict {
    pub fn eloise_wins(&self) -> bool {
        matches!(self, Verdict::EloiseWin { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::EloiseWin { entry } => write!(f, "EloiseWin(entry {entry})"),
            Verdict::AbelardWin { reason: Reason::Stuck } => f.write_str("AbelardWin(stuck)"),
            Verdict::AbelardWin { reason: Reason::Budget } => f.write_str("AbelardWin(budget)"),
        }
    }
}

/// One exchange: Eloise plays `m` with `t` at `entry`, Abelard answers.
#[derive(Clone, Debug)]
pub struct MatchMove {
    pub entry: usize,
    pub m: u64,
    pub t: Term,
    pub answer: Answer,
    /// Index of the entry the answer created.
    pub created: usize,
    /// The process (thread) Eloise played from; always 0 in G1.
    pub thread: usize,
    /// Machine steps taken before this move, over the whole match.
    pub step: u64,
}

/// The machine steps of one phase (G1) or one scheduler slice (G2).
#[derive(Clone, Debug)]
pub struct Segment {
    pub thread: usize,
    pub start: Process,
    pub rules: Vec<Rule>,
    /// Every visited process, when the match records them.
    pub processes: Vec<Process>,
    /// The last few processes of the segment, always kept.
    pub tail: Vec<Process>,
}

const TAIL: usize = 8;

impl Segment {
    fn new(thread: usize, start: Process) -> Segment {
        Segment {
            thread,
            start,
            rules: Vec::new(),
            processes: Vec::new(),
            tail: Vec::new(),
        }
    }

    fn observe(&mut self, p: &Process, record: bool) {
        if record {
            self.processes.push(p.clone());
        }
        if self.tail.len() == TAIL {
            self.tail.remove(0);
        }
        self.tail.push(p.clone());
    }

    pub fn contains_rule(&self, r: &Rule) -> bool {
        self.rules.contains(r)
    }
}

#[derive(Clone, Debug)]
pub struct MatchOutcome {
    pub game: Game,
    pub formula: String,
    pub verdict: Verdict,
    pub handle: Handle,
    pub history: Vec<HistoryEntry>,
    pub moves: Vec<MatchMove>,
    pub segments: Vec<Segment>,
    pub steps: u64,
    /// Why the match stopped when it is not plain from the verdict.
    pub note: Option<String>,
}

impl MatchOutcome {
    /// The Abelard answers in the order given, as a replayable script.
    pub fn script(&self) -> Script {
        Script {
            leading: self.handle.z.clone(),
            handle: Some(ScriptMove::handle(&self.handle.u, &self.handle.pi)),
            moves: self.moves.iter().map(|mv| ScriptMove::from_answer(&mv.answer)).collect(),
        }
    }

    pub fn all_rules(&self) -> impl Iterator<Item = &Rule> {
        self.segments.iter().flat_map(|s| s.rules.iter())
    }

    /// Whether `p` was visited; needs a match run with recording on.
    pub fn visited(&self, p: &Process) -> bool {
        self.segments.iter().any(|s| s.processes.contains(p))
    }

    pub fn to_json(&self) -> Value {
        let verdict = match self.verdict {
            Verdict::EloiseWin { entry } => json!({"winner": "eloise", "entry": entry}),
            Verdict::AbelardWin { reason } => json!({"winner": "abelard", "reason": reason}),
        };
        let moves: Vec<Value> = self
            .moves
            .iter()
            .map(|mv| {
                json!({
                    "entry": mv.entry,
                    "m": mv.m,
                    "t": mv.t.to_string(),
                    "answer": mv.answer.to_json(),
                    "created": mv.created,
                    "thread": mv.thread,
                    "step": mv.step,
                })
            })
            .collect();
        let segments: Vec<Value> = self
            .segments
            .iter()
            .map(|s| {
                let mut counts = std::collections::BTreeMap::<String, u64>::new();
                for r in &s.rules {
                    *counts.entry(r.to_string()).or_default() += 1;
                }
                json!({
                    "thread": s.thread,
                    "start": s.start.to_string(),
                    "steps": s.rules.len(),
                    "rules": counts,
                    "tail": s.tail.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "game": self.game,
            "formula": self.formula,
            "verdict": verdict,
            "handle": self.handle.to_json(),
            "history": self.history.iter().map(HistoryEntry::to_json).collect::<Vec<_>>(),
            "moves": moves,
            "segments": segments,
            "steps": self.steps,
            "note": self.note,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("game {} on {}\n", self.game, self.formula);
        out.push_str(&format!("handle: {} * {}", self.handle.u, self.handle.pi));
        if !self.handle.z.is_empty() {
            out.push_str(&format!(" with leading {:?}", self.handle.z));
        }
        out.push('\n');
        for mv in &self.moves {
            out.push_str(&format!(
                "step {}: eloise plays {} at entry {} (thread {}); abelard answers {} with {} * {} -> entry {}\n",
                mv.step, mv.m, mv.entry, mv.thread, mv.answer.n, mv.answer.u, mv.answer.pi, mv.created
            ));
        }
        if let Some(note) = &self.note {
            out.push_str(&format!("note: {note}\n"));
        }
        out.push_str(&format!("verdict: {} after {} steps\n", self.verdict, self.steps));
        out
    }
}

#[cfg(test)]
mod tests;
