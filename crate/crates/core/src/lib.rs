//! A Krivine abstract machine for the lambda-c calculus (with `cc`, `quote`,
//! `eq` and friends) and referees for the realizability games over prenex
//! arithmetical formulae.
//!
//! The crate is organised bottom-up:
//!
//! * [`syntax`]: terms, stacks, processes, parsing, printing, substitutions.
//! * [`machine`]: one-step evaluation, bounded runs, threads, instructions.
//! * [`formula`]: primitive recursive functions, Turing machines, formulae.
//! * [`game`]: the G0, G1 and G2 referees and Abelard strategies.
//! * [`scheme`]: thread-scheme extraction against fresh constants.
//! * [`realizers`]: the concrete realizers and their native combinators.

pub mod formula;
pub mod game;
pub mod machine;
pub mod realizers;
pub mod scheme;
pub mod syntax;

pub use syntax::{Constant, Process, Registry, Stack, StackConst, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("name `{0}` is already declared")]
    Duplicate(String),
    #[error("`{0}` is substitutive, which is incompatible with quote/eq")]
    SubstitutiveConflict(String),
    #[error("`{0}` is not an inert constant")]
    NotInert(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("{0} is out of range")]
    OutOfRange(String),
    #[error("term is not closed")]
    NotClosed,
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
