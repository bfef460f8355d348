//! Total functions on naturals: host-provided natives and the primitive
//! recursive combinators, with an s-expression syntax:
//!
//! ```text
//! zero | (zero k) | succ | (proj k i) | (comp f g1 .. gm) | (rec g h) | (native name)
//! ```
//!
//! `(proj k i)` selects the i-th of k arguments, counting from 1.
//! `(rec g h)` takes the recursion variable first:
//! `f(0, xs) = g(xs)` and `f(y+1, xs) = h(y, f(y, xs), xs)`.
//! Arithmetic saturates at `u64::MAX`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::Error;

type NativeFn = Arc<dyn Fn(&[u64]) -> u64 + Send + Sync>;

enum Node {
    Native {
        name: String,
        f: NativeFn,
    },
    Zero(usize),
    Succ,
    Proj(usize, usize),
    Comp(PrimRecFn, Vec<PrimRecFn>),
    Rec(PrimRecFn, PrimRecFn),
}

#[derive(Clone)]
pub struct PrimRecFn {
    node: Arc<Node>,
    arity: usize,
}

impl PrimRecFn {
    pub fn native(
        name: &str,
        arity: usize,
        f: impl Fn(&[u64]) -> u64 + Send + Sync + 'static,
    ) -> Self {
        PrimRecFn {
            node: Arc::new(Node::Native {
                name: name.to_string(),
                f: Arc::new(f),
            }),
            arity,
        }
    }

    pub fn zero(arity: usize) -> Self {
        PrimRecFn {
            node: Arc::new(Node::Zero(arity)),
            arity,
        }
    }

    pub fn succ() -> Self {
        PrimRecFn {
            node: Arc::new(Node::Succ),
            arity: 1,
        }
    }

    /// The `i`-th (from 1) of `k` arguments.
    pub fn proj(k: usize, i: usize) -> Result<Self, Error> {
        if i == 0 || i > k {
            return Err(Error::OutOfRange(format!("projection {i} of {k}")));
        }
        Ok(PrimRecFn {
            node: Arc::new(Node::Proj(k, i)),
            arity: k,
        })
    }

    pub fn comp(f: PrimRecFn, gs: Vec<PrimRecFn>) -> Result<Self, Error> {
        if f.arity != gs.len() {
            return Err(Error::Arity {
                expected: f.arity,
                got: gs.len(),
            });
        }
        let arity = match gs.first() {
            Some(g) => g.arity,
            None => 0,
        };
        if let Some(g) = gs.iter().find(|g| g.arity != arity) {
            return Err(Error::Arity {
                expected: arity,
                got: g.arity,
            });
        }
        Ok(PrimRecFn {
            node: Arc::new(Node::Comp(f, gs)),
            arity,
        })
    }

    pub fn rec(g: PrimRecFn, h: PrimRecFn) -> Result<Self, Error> {
        if h.arity != g.arity + 2 {
            return Err(Error::Arity {
                expected: g.arity + 2,
                got: h.arity,
            });
        }
        let arity = g.arity + 1;
        Ok(PrimRecFn {
            node: Arc::new(Node::Rec(g, h)),
            arity,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[u64]) -> Result<u64, Error> {
        if args.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                got: args.len(),
            });
        }
        Ok(self.eval_unchecked(args))
    }

    fn eval_unchecked(&self, args: &[u64]) -> u64 {
        match &*self.node {
            Node::Native { f, .. } => f(args),
            Node::Zero(_) => 0,
            Node::Succ => args[0].saturating_add(1),
            Node::Proj(_, i) => args[i - 1],
            Node::Comp(f, gs) => {
                let inner: Vec<u64> = gs.iter().map(|g| g.eval_unchecked(args)).collect();
                f.eval_unchecked(&inner)
            }
            Node::Rec(g, h) => {
                let (y, xs) = (args[0], &args[1..]);
                let mut acc = g.eval_unchecked(xs);
                let mut buf = Vec::with_capacity(args.len() + 1);
                for i in 0..y {
                    buf.clear();
                    buf.push(i);
                    buf.push(acc);
                    buf.extend_from_slice(xs);
                    acc = h.eval_unchecked(&buf);
                }
                acc
            }
        }
    }

    /// `h o f` with `h(x) = 1 if x = 0 else 0`.
    pub fn negate(&self) -> PrimRecFn {
        let f = self.clone();
        PrimRecFn::native("not", self.arity, move |a| u64::from(f.eval_unchecked(a) == 0))
    }
}

impl fmt::Display for PrimRecFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Native { name, .. } => write!(f, "(native {name})"),
            Node::Zero(0) => f.write_str("zero"),
            Node::Zero(k) => write!(f, "(zero {k})"),
            Node::Succ => f.write_str("succ"),
            Node::Proj(k, i) => write!(f, "(proj {k} {i})"),
            Node::Comp(g, hs) => {
                write!(f, "(comp {g}")?;
                for h in hs {
                    write!(f, " {h}")?;
                }
                f.write_str(")")
            }
            Node::Rec(g, h) => write!(f, "(rec {g} {h})"),
        }
    }
}

impl fmt::Debug for PrimRecFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.arity)
    }
}

/// Named native functions, looked up by `(native name)`.
#[derive(Clone, Default)]
pub struct Natives {
    by_name: HashMap<String, PrimRecFn>,
}

impl Natives {
    pub fn empty() -> Self {
        Natives::default()
    }

    /// `leq`, `g`, `phi4`, `halt`, `f_H`, `add`, `mul`, `monus`, `is_zero`,
    /// `true`, `false`.
    pub fn builtin() -> Self {
        let mut n = Natives::empty();
        let fns = [
            PrimRecFn::native("leq", 2, |a| a[0].saturating_sub(a[1])),
            PrimRecFn::native("g", 2, |a| g_fn(a[0], a[1])),
            PrimRecFn::native("phi4", 4, |a| phi4_fn(a[0], a[1], a[2], a[3])),
            PrimRecFn::native("halt", 2, |a| super::turing::halt(a[0], a[1]).unwrap_or(0)),
            super::turing::f_h(),
            PrimRecFn::native("add", 2, |a| a[0].saturating_add(a[1])),
            PrimRecFn::native("mul", 2, |a| a[0].saturating_mul(a[1])),
            PrimRecFn::native("monus", 2, |a| a[0].saturating_sub(a[1])),
            PrimRecFn::native("is_zero", 1, |a| u64::from(a[0] == 0)),
            PrimRecFn::native("true", 2, |_| 0),
            PrimRecFn::native("false", 2, |_| 1),
        ];
        for f in fns {
            let name = match &*f.node {
                Node::Native { name, .. } => name.clone(),
                _ => unreachable!(),
            };
            n.register(&name, f).expect("builtin names are distinct");
        }
        n
    }

    pub fn register(&mut self, name: &str, f: PrimRecFn) -> Result<(), Error> {
        if self.by_name.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        self.by_name.insert(name.to_string(), f);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<PrimRecFn, Error> {
        self.by_name
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Config(format!("unknown native function `{name}`")))
    }

    pub fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.by_name.keys().cloned().collect();
        v.sort();
        v
    }
}

/// `g(x, y) = x + (1 - x) y`, truncated subtraction.
pub fn g_fn(x: u64, y: u64) -> u64 {
    x.saturating_add(1u64.saturating_sub(x).saturating_mul(y))
}

/// Zero iff `x1 = y1` or `g(x1, x2) > g(y1, y2)`.
pub fn phi4_fn(x1: u64, x2: u64, y1: u64, y2: u64) -> u64 {
    u64::from(!(x1 == y1 || g_fn(x1, x2) > g_fn(y1, y2)))
}

#[derive(Debug, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_sexp(src: &str) -> Result<Sexp, Error> {
    let spaced = src.replace('(', " ( ").replace(')', " ) ");
    let mut toks = spaced.split_whitespace().peekable();
    fn go<'a>(toks: &mut std::iter::Peekable<impl Iterator<Item = &'a str>>) -> Result<Sexp, Error> {
        match toks.next() {
            Some("(") => {
                let mut items = Vec::new();
                while toks.peek() != Some(&")") {
                    if toks.peek().is_none() {
                        return Err(Error::Config("unbalanced `(` in function".into()));
                    }
                    items.push(go(toks)?);
                }
                toks.next();
                Ok(Sexp::List(items))
            }
            Some(")") => Err(Error::Config("unexpected `)` in function".into())),
            Some(a) => Ok(Sexp::Atom(a.to_string())),
            None => Err(Error::Config("empty function expression".into())),
        }
    }
    let e = go(&mut toks)?;
    if toks.next().is_some() {
        return Err(Error::Config("trailing input in function".into()));
    }
    Ok(e)
}

/// Parse the s-expression syntax; `(native name)` is resolved in `natives`.
pub fn parse_dsl(src: &str, natives: &Natives) -> Result<PrimRecFn, Error> {
    build(&read_sexp(src)?, natives)
}

fn build(e: &Sexp, natives: &Natives) -> Result<PrimRecFn, Error> {
    let num = |e: &Sexp| match e {
        Sexp::Atom(a) => a
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("expected a number, got `{a}`"))),
        Sexp::List(_) => Err(Error::Config("expected a number".into())),
    };
    match e {
        Sexp::Atom(a) if a == "zero" => Ok(PrimRecFn::zero(0)),
        Sexp::Atom(a) if a == "succ" => Ok(PrimRecFn::succ()),
        Sexp::Atom(a) => Err(Error::Config(format!("unknown combinator `{a}`"))),
        Sexp::List(items) => {
            let head = match items.first() {
                Some(Sexp::Atom(h)) => h.as_str(),
                _ => return Err(Error::Config("expected a combinator name".into())),
            };
            let rest = &items[1..];
            match (head, rest.len()) {
                ("zero", 1) => Ok(PrimRecFn::zero(num(&rest[0])?)),
                ("succ", 0) => Ok(PrimRecFn::succ()),
                ("proj", 2) => PrimRecFn::proj(num(&rest[0])?, num(&rest[1])?),
                ("comp", n) if n >= 1 => {
                    let f = build(&rest[0], natives)?;
                    let gs = rest[1..]
                        .iter()
                        .map(|g| build(g, natives))
                        .collect::<Result<Vec<_>, _>>()?;
                    PrimRecFn::comp(f, gs)
                }
                ("rec", 2) => PrimRecFn::rec(build(&rest[0], natives)?, build(&rest[1], natives)?),
                ("native", 1) => match &rest[0] {
                    Sexp::Atom(n) => natives.get(n),
                    Sexp::List(_) => Err(Error::Config("expected a native name".into())),
                },
                _ => Err(Error::Config(format!("malformed `{head}` form"))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ADD: &str = "(rec (proj 1 1) (comp succ (proj 3 2)))";
    const PRED: &str = "(rec zero (proj 2 1))";
    const MONUS: &str = "(comp (rec (proj 1 1) (comp (rec zero (proj 2 1)) (proj 3 2))) (proj 2 2) (proj 2 1))";
    const MUL: &str =
        "(rec (zero 1) (comp (rec (proj 1 1) (comp succ (proj 3 2))) (proj 3 3) (proj 3 2)))";
    const IS_ZERO: &str = "(rec (comp succ zero) (zero 2))";

    fn dsl(src: &str) -> PrimRecFn {
        parse_dsl(src, &Natives::builtin()).unwrap()
    }

    #[test]
    fn examples() {
        let n = Natives::builtin();
        assert_eq!(n.get("leq").unwrap().eval(&[0, 5]).unwrap(), 0);
        assert_ne!(n.get("leq").unwrap().eval(&[6, 5]).unwrap(), 0);
        let g = n.get("g").unwrap();
        assert_eq!(g.eval(&[0, 7]).unwrap(), 7);
        assert_eq!(g.eval(&[2, 7]).unwrap(), 2);
        assert_eq!(dsl(ADD).eval(&[3, 4]).unwrap(), 7);
        assert_eq!(dsl(PRED).eval(&[5]).unwrap(), 4);
        assert_eq!(
            g.eval(&[1]),
            Err(Error::Arity {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn dsl_agrees_with_natives() {
        let n = Natives::builtin();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pairs = [("add", ADD), ("monus", MONUS), ("leq", MONUS), ("mul", MUL)];
        for (name, src) in pairs {
            let (a, b) = (n.get(name).unwrap(), dsl(src));
            for _ in 0..1000 {
                let args = [rng.gen_range(0..60u64), rng.gen_range(0..60u64)];
                assert_eq!(a.eval(&args), b.eval(&args), "{name} {args:?}");
            }
        }
        let (a, b) = (n.get("is_zero").unwrap(), dsl(IS_ZERO));
        for x in 0..1000u64 {
            assert_eq!(a.eval(&[x % 50]), b.eval(&[x % 50]));
        }
    }

    #[test]
    fn h_function_duality() {
        let n = Natives::builtin();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for name in ["leq", "phi4", "g"] {
            let f = n.get(name).unwrap();
            let hf = f.negate();
            for _ in 0..200 {
                let args: Vec<u64> = (0..f.arity()).map(|_| rng.gen_range(0..6)).collect();
                assert_eq!(f.eval(&args).unwrap() == 0, hf.eval(&args).unwrap() != 0);
            }
        }
    }

    #[test]
    fn dsl_errors() {
        let n = Natives::builtin();
        assert!(parse_dsl("(proj 2 3)", &n).is_err());
        assert!(parse_dsl("(comp succ (proj 2 1) (proj 2 2))", &n).is_err());
        assert!(parse_dsl("(rec zero succ)", &n).is_err());
        assert!(parse_dsl("(native nope)", &n).is_err());
        assert!(parse_dsl("(comp succ", &n).is_err());
        assert_eq!(parse_dsl("(native leq)", &n).unwrap().arity(), 2);
        assert_eq!(dsl(ADD).to_string(), ADD);
    }
}
