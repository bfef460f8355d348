//! The extra instructions: `quote`, `eq`, `eq_nat` and `fork`.

use super::{Instruction, Reduct, StepContext};
use crate::syntax::{decode_numeral, numeral, Process, Stack, Term};

/// `quote * t . pi  >  t * n_pi . pi`
pub struct Quote;

impl Instruction for Quote {
    fn arity(&self) -> usize {
        1
    }

    fn reduce(&self, args: &[Term], rest: &Stack, cx: &mut StepContext) -> Reduct {
        let code = cx.quotes.code(rest);
        Reduct::One(Process::new(
            args[0].clone(),
            Stack::push(numeral(code), rest.clone()),
        ))
    }
}

/// `eq * t1 . t2 . u . v . pi  >  u * pi` if `t1` and `t2` are alpha-equal,
/// `v * pi` otherwise.
pub struct EqTest;

impl Instruction for EqTest {
    fn arity(&self) -> usize {
        4
    }

    fn reduce(&self, args: &[Term], rest: &Stack, _: &mut StepContext) -> Reduct {
        let pick = if args[0] == args[1] { &args[2] } else { &args[3] };
        Reduct::One(Process::new(pick.clone(), rest.clone()))
    }
}

/// `eq_nat * m . n . u . v . pi  >  u * pi` iff `m = n` as literal numerals.
pub struct EqNat;

impl Instruction for EqNat {
    fn arity(&self) -> usize {
        4
    }

    fn reduce(&self, args: &[Term], rest: &Stack, _: &mut StepContext) -> Reduct {
        match (decode_numeral(&args[0]), decode_numeral(&args[1])) {
            (Some(m), Some(n)) => {
                let pick = if m == n { &args[2] } else { &args[3] };
                Reduct::One(Process::new(pick.clone(), rest.clone()))
            }
            _ => Reduct::None,
        }
    }
}

/// `fork * t0 . t1 . pi  >  t0 * pi | t1 * pi`
pub struct Fork;

impl Instruction for Fork {
    fn arity(&self) -> usize {
        2
    }

    fn reduce(&self, args: &[Term], rest: &Stack, _: &mut StepContext) -> Reduct {
        Reduct::Fork(vec![
            Process::new(args[0].clone(), rest.clone()),
            Process::new(args[1].clone(), rest.clone()),
        ])
    }
}
