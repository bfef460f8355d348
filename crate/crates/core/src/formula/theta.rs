use std::sync::Arc;

use super::PrimRecFn;
use crate::machine::{Instruction, Reduct, StepContext};
use crate::realizers::codec::decode_tuple;
use crate::syntax::{decode_numeral, Constant, Process, Registry, Stack, Term};
use crate::Error;

/// `Theta * a . b . t0 . t1 . pi  >  t0 * pi` if `f(a, b) = 0`, `t1 * pi`
/// otherwise. `a` and `b` are tuples of the given lengths; a length-one
/// side may also be a bare numeral. Undecodable arguments block the rule.
pub struct Theta {
    f: PrimRecFn,
    left: usize,
    right: usize,
}

impl Theta {
    pub fn decide(&self, a: &Term, b: &Term) -> Option<bool> {
        let mut args = decode_side(a, self.left)?;
        args.extend(decode_side(b, self.right)?);
        Some(self.f.eval(&args).ok()? == 0)
    }
}

fn decode_side(t: &Term, k: usize) -> Option<Vec<u64>> {
    if k == 1 {
        if let Some(n) = decode_numeral(t) {
            return Some(vec![n]);
        }
    }
    decode_tuple(t).filter(|v| v.len() == k)
}

impl Instruction for Theta {
    fn arity(&self) -> usize {
        4
    }

    fn reduce(&self, args: &[Term], rest: &Stack, _: &mut StepContext) -> Reduct {
        match self.decide(&args[0], &args[1]) {
            Some(zero) => {
                let pick = if zero { &args[2] } else { &args[3] };
                Reduct::One(Process::new(pick.clone(), rest.clone()))
            }
            None => Reduct::None,
        }
    }
}

pub fn make_theta(f: PrimRecFn, split: (usize, usize)) -> Result<Arc<Theta>, Error> {
    if split.0 + split.1 != f.arity() {
        return Err(Error::Arity {
            expected: f.arity(),
            got: split.0 + split.1,
        });
    }
    Ok(Arc::new(Theta {
        f,
        left: split.0,
        right: split.1,
    }))
}

/// Declare a Theta instruction under `name` (kept if already declared).
pub fn register_theta(
    reg: &Registry,
    name: &str,
    f: PrimRecFn,
    split: (usize, usize),
) -> Result<Constant, Error> {
    let theta = make_theta(f, split)?;
    reg.ensure_instruction(name, || theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Natives;
    use crate::machine::Machine;
    use crate::realizers::codec::encode_tuple;
    use crate::syntax::{numeral, parse_stack};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn branches() {
        let reg = Registry::standard();
        let leq = Natives::builtin().get("leq").unwrap();
        let th = register_theta(&reg, "theta_leq", leq, (1, 1)).unwrap();
        let mut m = Machine::new(&reg);
        let rest = parse_stack("c0 . c1 . a0", &reg).unwrap();
        let run = |a: u64, b: u64, m: &mut Machine| {
            let s = Stack::push_all([numeral(a), numeral(b)], rest.clone());
            m.step_one(&Process::new(Term::constant(&th), s)).unwrap().1
        };
        assert_eq!(run(0, 5, &mut m).head.as_const().unwrap().name(), "c0");
        assert_eq!(run(7, 5, &mut m).head.as_const().unwrap().name(), "c1");
        let bad = Stack::push_all([Term::constant(&th), numeral(1)], rest.clone());
        assert!(m.step_one(&Process::new(Term::constant(&th), bad)).is_none());
    }

    #[test]
    fn tuple_form_agrees_with_eval() {
        let reg = Registry::standard();
        let phi4 = Natives::builtin().get("phi4").unwrap();
        let th = register_theta(&reg, "theta_phi4", phi4.clone(), (2, 2)).unwrap();
        let mut m = Machine::new(&reg);
        let rest = parse_stack("c0 . c1 . a0", &reg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let v: Vec<u64> = (0..4).map(|_| rng.gen_range(0..5)).collect();
            let s = Stack::push_all(
                [encode_tuple(&v[..2]), encode_tuple(&v[2..])],
                rest.clone(),
            );
            let q = m.step_one(&Process::new(Term::constant(&th), s)).unwrap().1;
            let zero = phi4.eval(&v).unwrap() == 0;
            assert_eq!(q.head.as_const().unwrap().name() == "c0", zero, "{v:?}");
        }
    }

    #[test]
    fn split_must_cover_arity() {
        let leq = Natives::builtin().get("leq").unwrap();
        assert!(make_theta(leq, (1, 2)).is_err());
    }
}
