//! The universal realizer `t_phi` as a bundle of native instructions.
//!
//! For a formula named `phi` of depth `h` the bundle declares `phi_T1` ..
//! `phi_Th`, `phi_N`, `phi_L`, `phi_theta`, the shared `next` and the entry
//! point `t_phi_phi`. Tuples and the history are the cons-list encodings of
//! [`super::codec`]; the history is kept newest first.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use super::codec::{cons, decode_history, decode_tuple, encode_history, encode_tuple, is_functional, HistEntry};
use super::enumerate::{index_of, next_tuple};
use crate::formula::{register_theta, ArithFormula};
use crate::machine::{Instruction, Reduct, StepContext};
use crate::syntax::{decode_numeral, numeral, Constant, Process, Registry, Stack, Term};
use crate::Error;

/// Counts `T_i` firings and how many of them saw a non-functional history.
#[derive(Debug, Default)]
pub struct PhiProbe {
    firings: AtomicU64,
    violations: AtomicU64,
}

impl PhiProbe {
    pub fn firings(&self) -> u64 {
        self.firings.load(Ordering::Relaxed)
    }

    pub fn violations(&self) -> u64 {
        self.violations.load(Ordering::Relaxed)
    }
}

struct Consts {
    t: Vec<Constant>,
    n: Constant,
    l: Constant,
    next: Constant,
    theta: Constant,
}

struct Shared {
    h: usize,
    consts: OnceLock<Consts>,
    probe: Arc<PhiProbe>,
}

impl Shared {
    fn c(&self) -> &Consts {
        self.consts.get().expect("bundle is complete before use")
    }
}

/// `T_i * <m>_h . <n>_{i-1} . H . n_i . u_i . pi_i`
struct TStep {
    i: usize,
    shared: Arc<Shared>,
}

impl Instruction for TStep {
    fn arity(&self) -> usize {
        5
    }

    fn reduce(&self, args: &[Term], rest: &Stack, _: &mut StepContext) -> Reduct {
        let sh = &self.shared;
        let (Some(m), Some(mut n), Some(hist), Some(ni)) = (
            decode_tuple(&args[0]),
            decode_tuple(&args[1]),
            decode_history(&args[2]),
            decode_numeral(&args[3]),
        ) else {
            return Reduct::None;
        };
        if m.len() != sh.h || n.len() + 1 != self.i {
            return Reduct::None;
        }
        n.push(ni);
        let u = args[4].clone();
        let entry = HistEntry {
            m: m[..self.i].to_vec(),
            n: n.clone(),
            u: u.clone(),
            pi: rest.clone(),
        };
        let mut full = vec![entry.clone()];
        full.extend(hist);
        sh.probe.firings.fetch_add(1, Ordering::Relaxed);
        if !is_functional(&full) {
            sh.probe.violations.fetch_add(1, Ordering::Relaxed);
        }
        let hist = cons(entry.encode(), args[2].clone());
        let c = sh.c();
        let next = if self.i < sh.h {
            let t = Term::apps(
                Term::constant(&c.t[self.i]),
                [args[0].clone(), encode_tuple(&n), hist],
            );
            Process::new(u, Stack::push_all([numeral(m[self.i]), t], rest.clone()))
        } else {
            let k = Term::apps(Term::constant(&c.n), [args[0].clone(), hist]);
            Process::new(
                Term::constant(&c.theta),
                Stack::push_all([args[0].clone(), encode_tuple(&n), u, k], rest.clone()),
            )
        };
        Reduct::One(next)
    }
}

/// `N * <m>_h . H . pi  >  next * <m>_h . (\x.L x H) . pi`
struct NStep {
    shared: Arc<Shared>,
}

impl Instruction for NStep {
    fn arity(&self) -> usize {
        2
    }

    fn reduce(&self, args: &[Term], rest: &Stack, _: &mut StepContext) -> Reduct {
        let c = self.shared.c();
        let k = Term::lam(
            "x",
            Term::apps(Term::constant(&c.l), [Term::free("x"), args[1].clone()]),
        );
        Reduct::One(Process::new(
            Term::constant(&c.next),
            Stack::push_all([args[0].clone(), k], rest.clone()),
        ))
    }
}

/// `next * <m>^i . t . pi  >  t * <m>^(i+1) . pi`
struct NextStep;

impl Instruction for NextStep {
    fn arity(&self) -> usize {
        2
    }

    fn reduce(&self, args: &[Term], rest: &Stack, _: &mut StepContext) -> Reduct {
        match decode_tuple(&args[0]) {
            Some(m) if !m.is_empty() => {
                let succ = next_tuple(index_of(&m) + 1, m.len());
                Reduct::One(Process::new(
                    args[1].clone(),
                    Stack::push(encode_tuple(&succ), rest.clone()),
                ))
            }
            _ => Reduct::None,
        }
    }
}

/// `L * <m'>_h . H . pi  >  u_i * m'_{i+1} . T_{i+1} <m'> <n>_i H . pi_i` for
/// the longest prefix `<m'>_i` recorded in `H`. The current stack is dropped.
struct LStep {
    shared: Arc<Shared>,
}

impl Instruction for LStep {
    fn arity(&self) -> usize {
        2
    }

    fn reduce(&self, args: &[Term], _: &Stack, _: &mut StepContext) -> Reduct {
        let sh = &self.shared;
        let (Some(m), Some(hist)) = (decode_tuple(&args[0]), decode_history(&args[1])) else {
            return Reduct::None;
        };
        if m.len() != sh.h {
            return Reduct::None;
        }
        let Some(entry) = (0..sh.h)
            .rev()
            .find_map(|i| hist.iter().find(|e| e.m[..] == m[..i]))
        else {
            return Reduct::None;
        };
        let i = entry.m.len();
        let t = Term::apps(
            Term::constant(&sh.c().t[i]),
            [args[0].clone(), encode_tuple(&entry.n), args[1].clone()],
        );
        Reduct::One(Process::new(
            entry.u.clone(),
            Stack::push_all([numeral(m[i]), t], entry.pi.clone()),
        ))
    }
}

/// `t_phi * u . pi  >  u * 0 . T_1 <0..0> <> [[<>, <>, u, k_pi]] . pi`
struct Start {
    shared: Arc<Shared>,
}

impl Instruction for Start {
    fn arity(&self) -> usize {
        1
    }

    fn reduce(&self, args: &[Term], rest: &Stack, _: &mut StepContext) -> Reduct {
        let sh = &self.shared;
        let h0 = encode_history(&[HistEntry {
            m: vec![],
            n: vec![],
            u: args[0].clone(),
            pi: rest.clone(),
        }]);
        let t = Term::apps(
            Term::constant(&sh.c().t[0]),
            [encode_tuple(&vec![0; sh.h]), encode_tuple(&[]), h0],
        );
        Reduct::One(Process::new(
            args[0].clone(),
            Stack::push_all([numeral(0), t], rest.clone()),
        ))
    }
}

/// The decoded history carried by a `T_i` or `L` continuation, if `t` is one.
pub fn history_of(t: &Term) -> Option<Vec<HistEntry>> {
    let mut cur = t;
    let mut args = Vec::new();
    while let Some((f, a)) = cur.as_app() {
        args.push(a);
        cur = f;
    }
    args.first().and_then(|h| decode_history(h))
}

/// Declare the `t_phi` bundle for `phi` and return its entry constant.
pub fn register_phi(reg: &Registry, phi: &ArithFormula) -> Result<(Constant, Arc<PhiProbe>), Error> {
    if phi.h == 0 {
        return Err(Error::Config(format!("formula `{}` has no quantifier block", phi.name)));
    }
    if phi.g > 0 {
        return Err(Error::Config(format!(
            "formula `{}` has a leading universal block; close it first",
            phi.name
        )));
    }
    let name = &phi.name;
    let entry = format!("t_phi_{name}");
    if reg.is_declared(&entry) {
        return Err(Error::Duplicate(entry));
    }
    let shared = Arc::new(Shared {
        h: phi.h,
        consts: OnceLock::new(),
        probe: Arc::new(PhiProbe::default()),
    });
    let mut t = Vec::with_capacity(phi.h);
    for i in 1..=phi.h {
        let step = Arc::new(TStep {
            i,
            shared: shared.clone(),
        });
        t.push(reg.declare_instruction(&format!("{name}_T{i}"), step)?);
    }
    let n = reg.declare_instruction(&format!("{name}_N"), Arc::new(NStep { shared: shared.clone() }))?;
    let l = reg.declare_instruction(&format!("{name}_L"), Arc::new(LStep { shared: shared.clone() }))?;
    let next = reg.ensure_instruction("next", || Arc::new(NextStep))?;
    let theta = register_theta(reg, &format!("{name}_theta"), phi.f.clone(), (phi.h, phi.h))?;
    let start = reg.declare_instruction(&entry, Arc::new(Start { shared: shared.clone() }))?;
    let probe = shared.probe.clone();
    shared
        .consts
        .set(Consts { t, n, l, next, theta })
        .map_err(|_| Error::Config("bundle initialised twice".into()))?;
    Ok((start, probe))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::FormulaRegistry;
    use crate::machine::{Machine, Rule};
    use crate::syntax::parse_stack;

    fn setup(name: &str) -> (Registry, Constant, Arc<PhiProbe>) {
        let reg = Registry::standard();
        let phi = FormulaRegistry::builtin().get(name).unwrap();
        let (c, p) = register_phi(&reg, &phi).unwrap();
        (reg, c, p)
    }

    #[test]
    fn start_rule() {
        let (reg, t, _) = setup("phi4");
        let u = reg.fresh_constant("k");
        let pi = parse_stack("a0", &reg).unwrap();
        let mut m = Machine::new(&reg);
        let p = Process::new(Term::constant(&t), Stack::push(Term::constant(&u), pi.clone()));
        let (rule, q) = m.step_one(&p).unwrap();
        assert_eq!(rule, Rule::Instr("t_phi_phi4".into()));
        assert_eq!(q.head, Term::constant(&u));
        let (args, rest) = q.stack.split(2).unwrap();
        assert_eq!(rest, pi);
        assert_eq!(decode_numeral(&args[0]), Some(0));
        let h = history_of(&args[1]).unwrap();
        assert_eq!(h.len(), 1);
        assert!(h[0].m.is_empty());
        assert_eq!(h[0].pi, pi);
    }

    #[test]
    fn t1_plays_next_component_and_records() {
        let (reg, t, probe) = setup("phi4");
        let mut m = Machine::new(&reg);
        let u0 = Term::constant(&reg.fresh_constant("k"));
        let p = Process::new(Term::constant(&t), Stack::push(u0, parse_stack("a0", &reg).unwrap()));
        let (_, q) = m.step_one(&p).unwrap();
        let (args, _) = q.stack.split(2).unwrap();
        let u1 = Term::constant(&reg.fresh_constant("k"));
        let pi1 = parse_stack("a1", &reg).unwrap();
        let p1 = Process::new(args[1].clone(), Stack::push_all([numeral(3), u1.clone()], pi1.clone()));
        let tr = m.run(&p1, 100, &mut [&mut |q: &Process| q.head == u1]);
        let last = tr.last();
        let (args, rest) = last.stack.split(2).unwrap();
        assert_eq!(rest, pi1);
        assert_eq!(decode_numeral(&args[0]), Some(0));
        let h = history_of(&args[1]).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!((h[0].m.clone(), h[0].n.clone()), (vec![0], vec![3]));
        assert_eq!(probe.firings(), 1);
        assert_eq!(probe.violations(), 0);
    }

    #[test]
    fn leaf_win_and_backtrack() {
        // leq: play 0; answer 0 wins, any answer wins since 0 <= n.
        let (reg, t, _) = setup("leq");
        let mut m = Machine::new(&reg);
        let u0 = Term::constant(&reg.fresh_constant("k"));
        let p = Process::new(Term::constant(&t), Stack::push(u0, parse_stack("a0", &reg).unwrap()));
        let (_, q) = m.step_one(&p).unwrap();
        let (args, _) = q.stack.split(2).unwrap();
        let u1 = Term::constant(&reg.fresh_constant("k"));
        let pi1 = parse_stack("a1", &reg).unwrap();
        let p1 = Process::new(args[1].clone(), Stack::push_all([numeral(9), u1.clone()], pi1.clone()));
        let goal = Process::new(u1, pi1);
        let tr = m.run(&p1, 100, &mut [&mut |q: &Process| *q == goal]);
        assert!(matches!(tr.status, crate::machine::Status::Watcher { .. }));
    }

    #[test]
    fn false_leaf_backtracks_to_longest_prefix() {
        let (reg, t, _) = setup("phi4");
        let mut m = Machine::new(&reg);
        let u0 = Term::constant(&reg.fresh_constant("k"));
        let a0 = parse_stack("a0", &reg).unwrap();
        let p = Process::new(Term::constant(&t), Stack::push(u0.clone(), a0.clone()));
        let (_, q) = m.step_one(&p).unwrap();
        let (args, _) = q.stack.split(2).unwrap();
        // Abelard answers y1 = 1 to x1 = 0.
        let u1 = Term::constant(&reg.fresh_constant("k"));
        let a1 = parse_stack("a1", &reg).unwrap();
        let p1 = Process::new(args[1].clone(), Stack::push_all([numeral(1), u1.clone()], a1.clone()));
        let tr = m.run(&p1, 100, &mut [&mut |q: &Process| q.head == u1]);
        let (args, _) = tr.last().stack.split(2).unwrap();
        // x2 = 0, Abelard answers y2 = 5: g(0,0) = 0 is not above g(1,5) = 1.
        let u2 = Term::constant(&reg.fresh_constant("k"));
        let a2 = parse_stack("a2", &reg).unwrap();
        let p2 = Process::new(args[1].clone(), Stack::push_all([numeral(5), u2], a2));
        let tr = m.run(&p2, 100, &mut [&mut |q: &Process| q.head == u0 || q.head == u1]);
        // next tuple after (0,0) is (1,0): its longest recorded prefix is the root.
        let last = tr.last();
        assert_eq!(last.head, u0);
        let (args, rest) = last.stack.split(2).unwrap();
        assert_eq!(rest, a0);
        assert_eq!(decode_numeral(&args[0]), Some(1));
        assert!(tr.rules().any(|r| *r == Rule::Instr("phi4_L".into())));
    }

    #[test]
    fn rejects_bad_formulas() {
        let reg = Registry::standard();
        let halt = FormulaRegistry::builtin().get("halt").unwrap();
        assert!(register_phi(&reg, &halt).is_err());
        let leq = FormulaRegistry::builtin().get("leq").unwrap();
        register_phi(&reg, &leq).unwrap();
        assert!(matches!(register_phi(&reg, &leq), Err(Error::Duplicate(_))));
    }
}
