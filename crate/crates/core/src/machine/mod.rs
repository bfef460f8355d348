//! The Krivine abstract machine: Push, Grab, Save and Restore, plus native
//! instructions attached to constants.

pub mod instr;
mod trace;

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{ConstKind, Name, Process, Registry, Stack, Term, TermKind};

pub use trace::{Status, Trace, TraceEntry};

/// A reduction rule attached to a constant. The machine pops `arity`
/// arguments and hands them over together with the remaining stack.
pub trait Instruction: Send + Sync {
    fn arity(&self) -> usize;
    fn reduce(&self, args: &[Term], rest: &Stack, cx: &mut StepContext) -> Reduct;
}

/// Outcome of an instruction rule.
pub enum Reduct {
    None,
    One(Process),
    Fork(Vec<Process>),
}

/// Which rule produced a step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", from = "String")]
pub enum Rule {
    Push,
    Grab,
    Save,
    Restore,
    Instr(Name),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Push => f.write_str("push"),
            Rule::Grab => f.write_str("grab"),
            Rule::Save => f.write_str("save"),
            Rule::Restore => f.write_str("restore"),
            Rule::Instr(n) => f.write_str(n),
        }
    }
}

impl From<Rule> for String {
    fn from(r: Rule) -> String {
        r.to_string()
    }
}

impl From<String> for Rule {
    fn from(s: String) -> Rule {
        match s.as_str() {
            "push" => Rule::Push,
            "grab" => Rule::Grab,
            "save" => Rule::Save,
            "restore" => Rule::Restore,
            _ => Rule::Instr(Name::from(s)),
        }
    }
}

/// First-seen intern table for `quote`: the j-th distinct stack gets code j.
#[derive(Clone, Debug, Default)]
pub struct QuoteTable {
    codes: HashMap<Stack, u64>,
}

impl QuoteTable {
    pub fn code(&mut self, s: &Stack) -> u64 {
        let next = self.codes.len() as u64;
        *self.codes.entry(s.clone()).or_insert(next)
    }

    pub fn peek(&self, s: &Stack) -> Option<u64> {
        self.codes.get(s).copied()
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

/// Mutable state visible to instructions during a step.
#[derive(Debug, Default)]
pub struct StepContext {
    pub quotes: QuoteTable,
}

/// Result of one step.
pub struct Step {
    pub rule: Rule,
    pub next: Vec<Process>,
}

/// One step of evaluation; `None` when no rule applies.
pub fn step(p: &Process, cx: &mut StepContext) -> Option<Step> {
    let one = |rule, head, stack| {
        Some(Step {
            rule,
            next: vec![Process::new(head, stack)],
        })
    };
    match p.head.kind() {
        TermKind::App(t, u) => one(Rule::Push, t.clone(), Stack::push(u.clone(), p.stack.clone())),
        TermKind::Lam(_, body) => {
            let (u, rest) = p.stack.pop()?;
            one(Rule::Grab, body.instantiate(u, 0), rest.clone())
        }
        TermKind::Cont(pi) => {
            let (t, _) = p.stack.pop()?;
            one(Rule::Restore, t.clone(), pi.clone())
        }
        TermKind::Const(c) => match c.kind() {
            ConstKind::Cc => {
                let (t, rest) = p.stack.pop()?;
                one(
                    Rule::Save,
                    t.clone(),
                    Stack::push(Term::cont(rest.clone()), rest.clone()),
                )
            }
            ConstKind::Instruction(rule) => {
                let (args, rest) = p.stack.split(rule.arity())?;
                let name = Rule::Instr(Name::from(c.name()));
                match rule.reduce(&args, &rest, cx) {
                    Reduct::None => None,
                    Reduct::One(q) => Some(Step {
                        rule: name,
                        next: vec![q],
                    }),
                    Reduct::Fork(qs) => Some(Step {
                        rule: name,
                        next: qs,
                    }),
                }
            }
            ConstKind::Inert { .. } => None,
        },
        TermKind::Bound(_) | TermKind::Free(_) => None,
    }
}

/// A machine instance: the registry it evaluates under and the state a run
/// accumulates (the quote table). Games keep one machine for a whole match.
pub struct Machine {
    registry: Registry,
    cx: StepContext,
}

/// A predicate observed on every visited process during [`Machine::run`].
pub type Watcher<'a> = &'a mut dyn FnMut(&Process) -> bool;

impl Machine {
    pub fn new(registry: &Registry) -> Self {
        Machine {
            registry: registry.clone(),
            cx: StepContext::default(),
        }
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn is_deterministic(&self) -> bool {
        self.registry.is_deterministic()
    }

    pub fn context(&mut self) -> &mut StepContext {
        &mut self.cx
    }

    pub fn quote_code(&mut self, s: &Stack) -> u64 {
        self.cx.quotes.code(s)
    }

    /// All successors of `p` with the rule used.
    pub fn step(&mut self, p: &Process) -> Option<Step> {
        step(p, &mut self.cx)
    }

    /// The unique successor; on a `fork` the first branch is taken.
    pub fn step_one(&mut self, p: &Process) -> Option<(Rule, Process)> {
        let s = step(p, &mut self.cx)?;
        let q = s.next.into_iter().next()?;
        Some((s.rule, q))
    }

    /// Iterate [`Machine::step_one`] for at most `budget` steps. Stops at the
    /// first watcher hit, at a stuck process or at a revisited process.
    pub fn run(&mut self, p: &Process, budget: usize, watchers: &mut [Watcher<'_>]) -> Trace {
        let mut entries = vec![TraceEntry {
            process: p.clone(),
            rule: None,
        }];
        let mut seen: HashMap<Process, usize> = HashMap::new();
        seen.insert(p.clone(), 0);
        let hit = |ws: &mut [Watcher<'_>], q: &Process| ws.iter_mut().position(|w| w(q));
        if let Some(w) = hit(watchers, p) {
            return Trace::new(entries, Status::Watcher { watcher: w, index: 0 });
        }
        let mut cur = p.clone();
        for _ in 0..budget {
            let Some((rule, next)) = self.step_one(&cur) else {
                return Trace::new(entries, Status::Stuck);
            };
            let index = entries.len();
            entries.push(TraceEntry {
                process: next.clone(),
                rule: Some(rule),
            });
            if let Some(w) = hit(watchers, &next) {
                return Trace::new(entries, Status::Watcher { watcher: w, index });
            }
            if let Some(&entry) = seen.get(&next) {
                return Trace::new(
                    entries,
                    Status::Cycle {
                        entry,
                        period: index - entry,
                    },
                );
            }
            seen.insert(next.clone(), index);
            cur = next;
        }
        Trace::new(entries, Status::Budget)
    }

    /// Processes reachable from `p`, in breadth-first discovery order,
    /// exploring at most `budget` steps. With `fork` both branches are kept.
    pub fn thread(&mut self, p: &Process, budget: usize) -> Vec<Process> {
        let mut seen: HashSet<Process> = HashSet::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(p.clone());
        order.push(p.clone());
        queue.push_back(p.clone());
        let mut steps = 0;
        while let Some(q) = queue.pop_front() {
            if steps >= budget {
                break;
            }
            steps += 1;
            if let Some(s) = self.step(&q) {
                for r in s.next {
                    if seen.insert(r.clone()) {
                        order.push(r.clone());
                        queue.push_back(r);
                    }
                }
            }
        }
        order
    }
}
