//! Lambda-c syntax: terms, stacks, processes, the constant registry, the
//! concrete grammar, numerals and the three substitution operators.

mod numeral;
mod parse;
mod print;
mod registry;
mod subst;
mod term;

pub use numeral::{decode_numeral, numeral, succ, zero};
pub use parse::{parse_process, parse_stack, parse_term, parse_term_open};
pub use print::{print_process, print_stack, print_term};
pub use registry::{Decl, Extra, Registry};
pub use subst::{alpha_eq, subst_const, subst_stack_const, subst_var, Subject};
pub use term::{
    ConstDecl, ConstKind, Constant, Name, Process, Stack, StackConst, StackConstDecl, StackKind,
    Term, TermKind,
};
