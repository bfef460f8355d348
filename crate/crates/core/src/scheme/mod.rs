//! Thread schemes: run a realizer against fresh interaction constants,
//! answer its plays from a fixed integer sequence, and record the tree of
//! positions it visits.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::formula::ArithFormula;
use crate::machine::{Machine, Status};
use crate::syntax::{
    decode_numeral, numeral, subst_const, subst_stack_const, subst_var, Constant, Process, Registry, Stack,
    StackConst, Term,
};
use crate::Error;

pub type Path = Vec<u64>;

/// A finite tree of paths, stored in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTree {
    order: Vec<Path>,
    set: HashSet<Path>,
}

impl Default for PathTree {
    fn default() -> Self {
        PathTree::new()
    }
}

impl PathTree {
    /// The tree holding only the empty path.
    pub fn new() -> PathTree {
        PathTree {
            order: vec![vec![]],
            set: HashSet::from([vec![]]),
        }
    }

    pub fn contains(&self, p: &[u64]) -> bool {
        self.set.contains(p)
    }

    /// `phi(i)`: the `i`-th path added.
    pub fn phi(&self, i: usize) -> Option<&Path> {
        self.order.get(i)
    }

    pub fn paths(&self) -> &[Path] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Add `parent . c` for the least `c` not yet used.
    pub fn add_child(&mut self, parent: &[u64]) -> Result<Path, Error> {
        if !self.contains(parent) {
            return Err(Error::OutOfRange(format!("path {parent:?}")));
        }
        let mut child = parent.to_vec();
        child.push(0);
        while self.set.contains(&child) {
            *child.last_mut().expect("nonempty") += 1;
        }
        self.insert(child.clone())?;
        Ok(child)
    }

    /// Add a path whose parent and left siblings are present.
    pub fn insert(&mut self, p: Path) -> Result<(), Error> {
        let Some((&c, parent)) = p.split_last() else {
            return Err(Error::Duplicate("root".into()));
        };
        if self.set.contains(&p) {
            return Err(Error::Duplicate(format!("{p:?}")));
        }
        if !self.set.contains(parent) {
            return Err(Error::OutOfRange(format!("parent of {p:?}")));
        }
        if c > 0 {
            let mut left = parent.to_vec();
            left.push(c - 1);
            if !self.set.contains(&left) {
                return Err(Error::OutOfRange(format!("left sibling of {p:?}")));
            }
        }
        self.set.insert(p.clone());
        self.order.push(p);
        Ok(())
    }

    /// Prefix-closed, left-sibling-closed, and so is every initial segment
    /// of the insertion order.
    pub fn check_invariants(&self) -> bool {
        let mut seen: HashSet<&[u64]> = HashSet::new();
        for p in &self.order {
            if let Some((&c, parent)) = p.split_last() {
                if !seen.contains(parent) {
                    return false;
                }
                if c > 0 {
                    let mut left = parent.to_vec();
                    left.push(c - 1);
                    if !seen.contains(left.as_slice()) {
                        return false;
                    }
                }
            }
            if !seen.insert(p) {
                return false;
            }
        }
        seen.len() == self.set.len()
    }
}

/// Position `i` of a scheme: `t_i`, its interaction constants, and the
/// integers that created it.
#[derive(Clone, Debug)]
pub struct SchemeNode {
    pub idx: usize,
    pub path: Path,
    /// Eloise's integer (none at the root).
    pub m: Option<u64>,
    /// Abelard's integer.
    pub n: Option<u64>,
    /// The position this one extends.
    pub parent: Option<usize>,
    pub term: Term,
    pub kappa: Constant,
    pub alpha: StackConst,
}

/// `from > to`, where `from` is `t_i * n_i . kappa_i . alpha_i` and `to` is
/// `kappa_j * m . t . alpha_j` or, on the last line, `kappa_s * alpha_s`.
#[derive(Clone, Debug)]
pub struct SchemeLine {
    pub from: Process,
    pub to: Process,
    pub target: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    /// Step budget exhausted, a cycle, or no answers left.
    Budget(String),
    /// Stuck on something other than a position of the scheme.
    Stuck(String),
    /// Reached `kappa_s * alpha_s` at depth other than `h`.
    WrongDepth { s: usize, depth: usize },
    /// Reached a complete position where the formula is false.
    FormulaFalse { s: usize },
    /// Played at a complete position.
    PlayAtLeaf { j: usize },
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Budget(why) => write!(f, "budget ({why})"),
            Failure::Stuck(at) => write!(f, "stuck at {at}"),
            Failure::WrongDepth { s, depth } => write!(f, "stuck at wrong depth: position {s} has depth {depth}"),
            Failure::FormulaFalse { s } => write!(f, "formula false at position {s}"),
            Failure::PlayAtLeaf { j } => write!(f, "play at complete position {j}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThreadScheme {
    pub formula: String,
    pub h: usize,
    pub nseq: Vec<u64>,
    pub nodes: Vec<SchemeNode>,
    pub lines: Vec<SchemeLine>,
    pub tree: PathTree,
    /// `(f, s)`: the last line starts at `t_f` and ends at `kappa_s * alpha_s`.
    pub result: Result<(usize, usize), Failure>,
}

fn fresh_pair(reg: &Registry) -> (Constant, StackConst) {
    (reg.fresh_constant("kappa"), reg.fresh_stack_constant("alpha"))
}

/// Run `t0 * kappa_0 . alpha_0` and follow the scheme construction, answering
/// the `i`-th play with `nseq[i]`. Each run is bounded by `budget` steps.
pub fn extract_scheme(
    t0: &Term,
    reg: &Registry,
    phi: &ArithFormula,
    nseq: &[u64],
    budget: usize,
) -> Result<ThreadScheme, Error> {
    if !reg.is_substitutive_regime() {
        return Err(Error::Config(
            "scheme extraction needs substitutive constants; quote/eq are installed".into(),
        ));
    }
    if !reg.is_deterministic() {
        return Err(Error::Config("scheme extraction needs a deterministic machine".into()));
    }
    if !t0.is_closed() {
        return Err(Error::NotClosed);
    }
    if phi.g > 0 {
        return Err(Error::Config(format!("formula `{}` has leading universals", phi.name)));
    }
    let mut machine = Machine::new(reg);
    let (k0, a0) = fresh_pair(reg);
    let mut s = ThreadScheme {
        formula: phi.name.clone(),
        h: phi.h,
        nseq: nseq.to_vec(),
        nodes: vec![SchemeNode {
            idx: 0,
            path: vec![],
            m: None,
            n: None,
            parent: None,
            term: t0.clone(),
            kappa: k0.clone(),
            alpha: a0.clone(),
        }],
        lines: Vec::new(),
        tree: PathTree::new(),
        result: Err(Failure::Budget("not started".into())),
    };
    let mut from = Process::new(t0.clone(), Stack::push(Term::constant(&k0), Stack::bottom(&a0)));
    loop {
        let i = s.nodes.len() - 1;
        let trace = machine.run(&from, budget, &mut []);
        let last = trace.last().clone();
        match trace.status {
            Status::Stuck => {}
            Status::Budget => {
                s.result = Err(Failure::Budget(format!("{budget} steps from t{i}")));
                return Ok(s);
            }
            other => {
                s.result = Err(Failure::Budget(format!("{other} from t{i}")));
                return Ok(s);
            }
        }
        let Some(j) = last
            .head
            .as_const()
            .and_then(|c| s.nodes.iter().position(|nd| nd.kappa == *c))
        else {
            s.result = Err(Failure::Stuck(last.to_string()));
            return Ok(s);
        };
        let alpha_j = Stack::bottom(&s.nodes[j].alpha);
        let depth = s.nodes[j].path.len();
        let line = |to: Process| SchemeLine {
            from: from.clone(),
            to,
            target: j,
            steps: trace.steps(),
        };
        if last.stack == alpha_j {
            s.lines.push(line(last.clone()));
            s.result = if depth != phi.h {
                Err(Failure::WrongDepth { s: j, depth })
            } else {
                let (m, n) = s.values_along(&s.nodes[j].path.clone()).expect("node path is in the tree");
                match phi.eval(&[], &m, &n) {
                    Ok(0) => Ok((i, j)),
                    _ => Err(Failure::FormulaFalse { s: j }),
                }
            };
            return Ok(s);
        }
        let play = last
            .stack
            .split(2)
            .filter(|(_, rest)| *rest == alpha_j)
            .and_then(|(args, _)| Some((decode_numeral(&args[0])?, args[1].clone())));
        let Some((m, t)) = play else {
            s.result = Err(Failure::Stuck(last.to_string()));
            return Ok(s);
        };
        s.lines.push(line(last.clone()));
        if depth >= phi.h {
            s.result = Err(Failure::PlayAtLeaf { j });
            return Ok(s);
        }
        let parent_path = s.nodes[j].path.clone();
        let path = s.tree.add_child(&parent_path)?;
        let (k, a) = fresh_pair(reg);
        let Some(&n) = nseq.get(i) else {
            s.nodes.push(SchemeNode {
                idx: i + 1,
                path,
                m: Some(m),
                n: None,
                parent: Some(j),
                term: t,
                kappa: k,
                alpha: a,
            });
            s.result = Err(Failure::Budget("answers exhausted".into()));
            return Ok(s);
        };
        from = Process::new(
            t.clone(),
            Stack::push_all([numeral(n), Term::constant(&k)], Stack::bottom(&a)),
        );
        s.nodes.push(SchemeNode {
            idx: i + 1,
            path,
            m: Some(m),
            n: Some(n),
            parent: Some(j),
            term: t,
            kappa: k,
            alpha: a,
        });
    }
}

impl ThreadScheme {
    pub fn is_complete(&self) -> bool {
        self.result.is_ok()
    }

    pub fn node_at(&self, path: &[u64]) -> Option<&SchemeNode> {
        self.nodes.iter().find(|nd| nd.path == path)
    }

    /// `(m, n)` collected along `path`: the integers of every proper prefix
    /// extended by one.
    pub fn values_along(&self, path: &[u64]) -> Result<(Vec<u64>, Vec<u64>), Error> {
        let (mut m, mut n) = (Vec::new(), Vec::new());
        for i in 1..=path.len() {
            let nd = self
                .node_at(&path[..i])
                .ok_or_else(|| Error::OutOfRange(format!("path {path:?}")))?;
            m.push(nd.m.expect("non-root node has m"));
            n.push(nd.n.ok_or_else(|| Error::OutOfRange(format!("answer at {:?}", &path[..i])))?);
        }
        Ok((m, n))
    }

    /// The substitution along `path`: `x_i := m`, `y_i := n` at each prefix.
    pub fn substitution(&self, path: &[u64]) -> Result<Vec<(String, u64)>, Error> {
        if !self.tree.contains(path) {
            return Err(Error::OutOfRange(format!("path {path:?}")));
        }
        let (m, n) = self.values_along(path)?;
        let mut out = Vec::with_capacity(2 * path.len());
        for (i, (x, y)) in m.iter().zip(&n).enumerate() {
            out.push((format!("x{}", i + 1), *x));
            out.push((format!("y{}", i + 1), *y));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .map(|nd| {
                json!({
                    "idx": nd.idx,
                    "path": nd.path,
                    "m": nd.m,
                    "n": nd.n,
                    "parent": nd.parent,
                    "term": nd.term.to_string(),
                })
            })
            .collect();
        let (fin, status) = match &self.result {
            Ok((f, s)) => (json!({"f": f, "s": s}), "complete".to_string()),
            Err(e) => (Value::Null, format!("failure: {e}")),
        };
        json!({
            "formula": self.formula,
            "h": self.h,
            "answers": self.nseq,
            "nodes": nodes,
            "final": fin,
            "status": status,
        })
    }

    fn path_text(p: &[u64]) -> String {
        if p.is_empty() {
            "()".into()
        } else {
            p.iter().map(u64::to_string).collect::<Vec<_>>().join(".")
        }
    }

    /// Two columns, one scheme line per row, with `t_i` written by index.
    pub fn to_text(&self) -> String {
        let mut rows = Vec::new();
        for (i, line) in self.lines.iter().enumerate() {
            let left = match self.nodes[i].n {
                None => format!("t{i} * kappa{i} . alpha{i}"),
                Some(n) => format!("t{i} * #{n} . kappa{i} . alpha{i}"),
            };
            let j = line.target;
            let right = match self.nodes.get(i + 1) {
                Some(next) if next.parent == Some(j) && line.to.stack.len() == 2 => {
                    format!("kappa{j} * #{} . t{} . alpha{j}", next.m.unwrap_or(0), i + 1)
                }
                _ => format!("kappa{j} * alpha{j}"),
            };
            rows.push((left, right));
        }
        let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (l, r) in &rows {
            let _ = writeln!(out, "{l:width$}  >  {r}");
        }
        out.push('\n');
        for nd in self.nodes.iter().skip(1) {
            let _ = writeln!(
                out,
                "phi({}) = {}   m = {}   n = {}",
                nd.idx,
                Self::path_text(&nd.path),
                nd.m.map_or("-".into(), |v| v.to_string()),
                nd.n.map_or("-".into(), |v| v.to_string()),
            );
        }
        match &self.result {
            Ok((f, s)) => {
                let _ = writeln!(out, "f = {f}, s = {s}");
            }
            Err(e) => {
                let _ = writeln!(out, "failure: {e}");
            }
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph scheme {\n");
        for nd in &self.nodes {
            let label = match (nd.m, nd.n) {
                (Some(m), Some(n)) => format!("{}\\nm={m} n={n}", Self::path_text(&nd.path)),
                (Some(m), None) => format!("{}\\nm={m}", Self::path_text(&nd.path)),
                _ => "()".into(),
            };
            let _ = writeln!(out, "  n{} [label=\"{}: {}\"];", nd.idx, nd.idx, label);
            if let Some(p) = nd.parent {
                let _ = writeln!(out, "  n{p} -> n{};", nd.idx);
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `subject` with `x_i`, `y_i` replaced by the numerals along `path`.
pub fn substitute_along(scheme: &ThreadScheme, path: &[u64], subject: &Term) -> Result<Term, Error> {
    Ok(scheme
        .substitution(path)?
        .iter()
        .fold(subject.clone(), |t, (x, v)| subst_var(&t, x, &numeral(*v))))
}

/// Apply `kappa_j := u_j`, `alpha_j := pi_j` to every line of the scheme and
/// return the predicted `(start, reached)` pairs. The replacements must be
/// closed and must not mention the scheme's own constants.
pub fn replay_with_substitution(
    scheme: &ThreadScheme,
    replacements: &[(Term, Stack)],
) -> Result<Vec<(Process, Process)>, Error> {
    if replacements.len() < scheme.nodes.len() {
        return Err(Error::Arity {
            expected: scheme.nodes.len(),
            got: replacements.len(),
        });
    }
    if replacements.iter().any(|(u, _)| !u.is_closed()) {
        return Err(Error::NotClosed);
    }
    let apply = |p: &Process| -> Result<Process, Error> {
        let mut q = p.clone();
        for (nd, (u, pi)) in scheme.nodes.iter().zip(replacements) {
            q = subst_const(&q, &nd.kappa, u)?;
            q = subst_stack_const(&q, &nd.alpha, pi);
        }
        Ok(q)
    };
    scheme
        .lines
        .iter()
        .map(|l| Ok((apply(&l.from)?, apply(&l.to)?)))
        .collect()
}
