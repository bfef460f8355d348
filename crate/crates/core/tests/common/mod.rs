//! Random closed terms, stacks and processes for the property tests.
#![allow(dead_code)]

use krivine::syntax::{numeral, parse_term, Extra};
use krivine::{Constant, Process, Registry, Stack, StackConst, Term};
use proptest::prelude::*;

/// Term shapes; variables index the enclosing binders.
#[derive(Clone, Debug)]
pub enum Shape {
    Var(usize),
    Atom(usize),
    Lam(Box<Shape>),
    App(Box<Shape>, Box<Shape>),
    Num(u64),
    Cont(Vec<Shape>, usize),
}

pub fn shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        4 => (0usize..4).prop_map(Shape::Var),
        3 => (0usize..16).prop_map(Shape::Atom),
        1 => (0u64..4).prop_map(Shape::Num),
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        prop_oneof![
            3 => inner.clone().prop_map(|b| Shape::Lam(Box::new(b))),
            3 => (inner.clone(), inner.clone()).prop_map(|(f, a)| Shape::App(Box::new(f), Box::new(a))),
            1 => (prop::collection::vec(inner, 0..3), 0usize..4).prop_map(|(ts, a)| Shape::Cont(ts, a)),
        ]
    })
}

pub fn stack_shape() -> impl Strategy<Value = (Vec<Shape>, usize)> {
    (prop::collection::vec(shape(), 0..4), 0usize..4)
}

/// What closed terms may be built from.
pub struct Palette {
    pub atoms: Vec<Term>,
    pub bottoms: Vec<StackConst>,
}

impl Palette {
    pub fn of(reg: &Registry, atoms: &[&str], bottoms: &[&str]) -> Palette {
        Palette {
            atoms: atoms.iter().map(|a| parse_term(a, reg).unwrap()).collect(),
            bottoms: bottoms.iter().map(|a| reg.stack_const(a).unwrap()).collect(),
        }
    }

    pub fn term_with(&self, s: &Shape, prefix: &str, depth: usize) -> Term {
        match s {
            Shape::Var(i) if depth > 0 => Term::free(&format!("{prefix}{}", depth - 1 - i % depth)),
            Shape::Var(i) | Shape::Atom(i) => self.atoms[i % self.atoms.len()].clone(),
            Shape::Num(n) => numeral(*n),
            Shape::Lam(b) => Term::lam(&format!("{prefix}{depth}"), self.term_with(b, prefix, depth + 1)),
            Shape::App(f, a) => Term::app(self.term_with(f, prefix, depth), self.term_with(a, prefix, depth)),
            Shape::Cont(ts, a) => Term::cont(self.stack(&(ts.clone(), *a))),
        }
    }

    pub fn term(&self, s: &Shape) -> Term {
        self.term_with(s, "x", 0)
    }

    pub fn stack(&self, (ts, a): &(Vec<Shape>, usize)) -> Stack {
        let bottom = Stack::bottom(&self.bottoms[a % self.bottoms.len()]);
        Stack::push_all(ts.iter().map(|t| self.term(t)), bottom)
    }

    pub fn process(&self, head: &Shape, stack: &(Vec<Shape>, usize)) -> Process {
        Process::new(self.term(head), self.stack(stack))
    }
}

/// `{cc}` plus one substitutive constant and stack constant.
pub fn cc_only() -> (Registry, Constant, StackConst) {
    let reg = Registry::empty();
    let k = reg.declare_inert("kappa", true).unwrap();
    let a = reg.declare_stack("alpha", true).unwrap();
    reg.declare_stack("beta", true).unwrap();
    (reg, k, a)
}

pub fn cc_palette(reg: &Registry) -> Palette {
    Palette::of(reg, &["cc", "kappa", r"\x.x", r"\x.x x"], &["alpha", "beta"])
}

pub fn standard_palette(reg: &Registry) -> Palette {
    Palette::of(reg, &["cc", "c0", "c1", "c2", "c3", r"\x.x"], &["a0", "a1", "a2", "a3"])
}

pub fn extras_registry() -> Registry {
    Registry::with_extras(&[Extra::Quote, Extra::Eq, Extra::EqNat])
}

pub fn extras_palette(reg: &Registry) -> Palette {
    Palette::of(reg, &["cc", "quote", "eq", "eq_nat", "c0", "c1"], &["a0", "a1"])
}
