//! Abelard strategies: scripted answers, fresh interaction constants, a
//! seeded random adversary and a callback for interactive play.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Game, HistoryEntry};
use crate::syntax::{numeral, parse_stack, parse_term, Registry, Stack, Term};
use crate::Error;

/// Abelard's opening move: leading numerals and the stack `u . pi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Handle {
    pub z: Vec<u64>,
    pub u: Term,
    pub pi: Stack,
}

impl Handle {
    pub fn to_json(&self) -> Value {
        json!({"leading": self.z, "u": self.u.to_string(), "pi": self.pi.to_string()})
    }
}

/// Abelard's reply `(n, u, pi)` to a play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub n: u64,
    pub u: Term,
    pub pi: Stack,
}

impl Answer {
    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "u": self.u.to_string(), "pi": self.pi.to_string()})
    }
}

/// What Abelard sees when asked to answer.
pub struct MoveRequest<'a> {
    pub game: Game,
    pub registry: &'a Registry,
    pub history: &'a [HistoryEntry],
    /// The entry Eloise plays at.
    pub entry: usize,
    pub m: u64,
    pub t: &'a Term,
}

pub trait Abelard {
    fn name(&self) -> String;
    /// The handle; `g` leading numerals are expected.
    fn handle(&mut self, reg: &Registry, g: usize) -> Result<Handle, Error>;
    /// `None` when Abelard has nothing left to play.
    fn answer(&mut self, req: &MoveRequest<'_>) -> Result<Option<Answer>, Error>;
}

/// One scripted move, terms in the concrete syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptMove {
    #[serde(default)]
    pub n: u64,
    pub u: String,
    pub pi: String,
}

impl ScriptMove {
    pub fn handle(u: &Term, pi: &Stack) -> ScriptMove {
        ScriptMove {
            n: 0,
            u: u.to_string(),
            pi: pi.to_string(),
        }
    }

    pub fn from_answer(a: &Answer) -> ScriptMove {
        ScriptMove {
            n: a.n,
            u: a.u.to_string(),
            pi: a.pi.to_string(),
        }
    }

    fn parse(&self, reg: &Registry) -> Result<(Term, Stack), Error> {
        Ok((parse_term(&self.u, reg)?, parse_stack(&self.pi, reg)?))
    }
}

/// An Abelard script file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    #[serde(default)]
    pub leading: Vec<u64>,
    /// Missing handle: fresh constants.
    #[serde(default)]
    pub handle: Option<ScriptMove>,
    #[serde(default)]
    pub moves: Vec<ScriptMove>,
}

impl Script {
    pub fn from_json(text: &str) -> Result<Script, Error> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad script: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scripts serialize")
    }
}

fn fresh_handle(reg: &Registry, z: Vec<u64>) -> Handle {
    Handle {
        z,
        u: Term::constant(&reg.fresh_constant("kappa")),
        pi: Stack::bottom(&reg.fresh_stack_constant("alpha")),
    }
}

fn leading(given: &[u64], g: usize) -> Result<Vec<u64>, Error> {
    match given.len() {
        0 => Ok(vec![0; g]),
        k if k == g => Ok(given.to_vec()),
        k => Err(Error::Arity { expected: g, got: k }),
    }
}

/// Plays the script's moves in order, whatever Eloise does.
pub struct Scripted {
    script: Script,
    next: usize,
}

impl Scripted {
    pub fn new(script: Script) -> Scripted {
        Scripted { script, next: 0 }
    }
}

impl Abelard for Scripted {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn handle(&mut self, reg: &Registry, g: usize) -> Result<Handle, Error> {
        let z = leading(&self.script.leading, g)?;
        match &self.script.handle {
            Some(h) => {
                let (u, pi) = h.parse(reg)?;
                Ok(Handle { z, u, pi })
            }
            None => Ok(fresh_handle(reg, z)),
        }
    }

    fn answer(&mut self, req: &MoveRequest<'_>) -> Result<Option<Answer>, Error> {
        let Some(mv) = self.script.moves.get(self.next) else {
            return Ok(None);
        };
        self.next += 1;
        let (u, pi) = mv.parse(req.registry)?;
        Ok(Some(Answer { n: mv.n, u, pi }))
    }
}

/// Answers with fresh inert constants `kappa` and fresh stack bottoms
/// `alpha`, taking the integers from `nseq` (then 0).
pub struct Fresh {
    nseq: Vec<u64>,
    leading: Vec<u64>,
    next: usize,
}

impl Fresh {
    pub fn new(nseq: Vec<u64>) -> Fresh {
        Fresh {
            nseq,
            leading: Vec::new(),
            next: 0,
        }
    }

    pub fn with_leading(mut self, z: Vec<u64>) -> Fresh {
        self.leading = z;
        self
    }
}

impl Abelard for Fresh {
    fn name(&self) -> String {
        "fresh".into()
    }

    fn handle(&mut self, reg: &Registry, g: usize) -> Result<Handle, Error> {
        Ok(fresh_handle(reg, leading(&self.leading, g)?))
    }

    fn answer(&mut self, req: &MoveRequest<'_>) -> Result<Option<Answer>, Error> {
        let n = self.nseq.get(self.next).copied().unwrap_or(0);
        self.next += 1;
        let h = fresh_handle(req.registry, vec![]);
        Ok(Some(Answer { n, u: h.u, pi: h.pi }))
    }
}

/// Seeded adversary drawing integers in `[0, max_n]`, terms from a small
/// closed grammar and stacks of up to two such terms over `a0`..`a3`. It
/// never repeats a `(u, pi)` already in the history.
pub struct RandomAbelard {
    rng: ChaCha8Rng,
    seed: u64,
    pub max_n: u64,
    pub depth: u32,
}

impl RandomAbelard {
    pub fn new(seed: u64) -> RandomAbelard {
        RandomAbelard {
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
            max_n: 5,
            depth: 2,
        }
    }

    fn atom(&mut self, reg: &Registry) -> Term {
        let k = self.rng.gen_range(0..9);
        let src = match k {
            0 => r"\x.x",
            1 => r"\x.x x",
            2 => r"\x y.x",
            3 => r"\x y.y",
            4 => return numeral(self.rng.gen_range(0..4)),
            _ => {
                let name = format!("c{}", k - 5);
                return match reg.constant(&name) {
                    Ok(c) => Term::constant(&c),
                    Err(_) => numeral(k as u64),
                };
            }
        };
        parse_term(src, &Registry::empty()).expect("grammar atoms parse")
    }

    pub fn term(&mut self, reg: &Registry, depth: u32) -> Term {
        if depth == 0 || self.rng.gen_bool(0.5) {
            return self.atom(reg);
        }
        if self.rng.gen_bool(0.7) {
            Term::app(self.term(reg, depth - 1), self.term(reg, depth - 1))
        } else {
            let body = Term::app(Term::free("x"), self.term(reg, depth - 1));
            Term::lam("x", body)
        }
    }

    pub fn stack(&mut self, reg: &Registry) -> Stack {
        let name = format!("a{}", self.rng.gen_range(0..4));
        let bottom = match reg.stack_const(&name) {
            Ok(a) => Stack::bottom(&a),
            Err(_) => Stack::bottom(&reg.fresh_stack_constant("alpha")),
        };
        let k = self.rng.gen_range(0..=2);
        let terms: Vec<Term> = (0..k).map(|_| self.term(reg, self.depth)).collect();
        Stack::push_all(terms, bottom)
    }
}

impl Abelard for RandomAbelard {
    fn name(&self) -> String {
        format!("random({})", self.seed)
    }

    fn handle(&mut self, reg: &Registry, g: usize) -> Result<Handle, Error> {
        let z = (0..g).map(|_| self.rng.gen_range(0..=self.max_n)).collect();
        let u = self.term(reg, self.depth);
        let pi = self.stack(reg);
        Ok(Handle { z, u, pi })
    }

    fn answer(&mut self, req: &MoveRequest<'_>) -> Result<Option<Answer>, Error> {
        let n = self.rng.gen_range(0..=self.max_n);
        for _ in 0..256 {
            let u = self.term(req.registry, self.depth);
            let pi = self.stack(req.registry);
            if !req.history.iter().any(|e| e.u == u && e.pi == pi) {
                return Ok(Some(Answer { n, u, pi }));
            }
        }
        let h = fresh_handle(req.registry, vec![]);
        Ok(Some(Answer { n, u: h.u, pi: h.pi }))
    }
}

type HandleFn = Box<dyn FnMut(&Registry, usize) -> Result<Handle, Error>>;
type AnswerFn = Box<dyn FnMut(&MoveRequest<'_>) -> Result<Option<Answer>, Error>>;

/// An Abelard made of two callbacks, e.g. a terminal prompt.
pub struct FnAbelard {
    name: String,
    handle: HandleFn,
    answer: AnswerFn,
}

impl FnAbelard {
    pub fn new(name: &str, handle: HandleFn, answer: AnswerFn) -> FnAbelard {
        FnAbelard {
            name: name.into(),
            handle,
            answer,
        }
    }
}

impl Abelard for FnAbelard {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn handle(&mut self, reg: &Registry, g: usize) -> Result<Handle, Error> {
        (self.handle)(reg, g)
    }

    fn answer(&mut self, req: &MoveRequest<'_>) -> Result<Option<Answer>, Error> {
        (self.answer)(req)
    }
}
