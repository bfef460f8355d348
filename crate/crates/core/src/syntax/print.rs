//! Printer producing text the parser reads back to an alpha-equal value.
//! Literal numerals print as `#n`.

use std::collections::HashSet;
use std::fmt;

use super::numeral::decode_numeral;
use super::term::{Process, Stack, StackKind, Term, TermKind};

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    /// Lambdas may extend to the right.
    Top,
    /// Function position or stack element: lambdas need parentheses.
    Head,
    /// Argument position: applications and lambdas need parentheses.
    Arg,
}

struct Printer {
    out: String,
    scope: Vec<String>,
    /// Names of constants and free variables; binders must avoid them.
    taken: HashSet<String>,
}

fn printable_hint(h: &str) -> bool {
    let mut cs = h.chars();
    let first_ok = matches!(cs.next(), Some(c) if c.is_ascii_alphabetic());
    first_ok
        && h.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && (h.len() == 1 || !h.chars().all(|c| c.is_ascii_alphabetic()))
}

fn collect_names(t: &Term, out: &mut HashSet<String>) {
    for c in t.constants() {
        out.insert(c.name().to_string());
    }
    for v in t.free_vars() {
        out.insert(v.to_string());
    }
}

impl Printer {
    fn new() -> Self {
        Printer {
            out: String::new(),
            scope: Vec::new(),
            taken: HashSet::new(),
        }
    }

    fn pick(&self, hint: &str) -> String {
        let base = if printable_hint(hint) {
            hint.to_string()
        } else {
            hint.chars()
                .find(|c| c.is_ascii_alphabetic())
                .map(|c| c.to_string())
                .unwrap_or_else(|| "x".into())
        };
        let clash = |n: &str| self.taken.contains(n) || self.scope.iter().any(|s| s == n);
        if !clash(&base) {
            return base;
        }
        let stem: String = base.trim_end_matches(|c: char| c.is_ascii_digit()).into();
        let stem = if stem.is_empty() { "x".to_string() } else { stem };
        (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|n| !clash(n))
            .expect("unbounded candidates")
    }

    fn term(&mut self, t: &Term, ctx: Ctx) {
        if let Some(n) = decode_numeral(t) {
            self.out.push_str(&format!("#{n}"));
            return;
        }
        match t.kind() {
            TermKind::Bound(i) => {
                let name = self
                    .scope
                    .len()
                    .checked_sub(*i as usize + 1)
                    .map(|k| self.scope[k].clone())
                    .unwrap_or_else(|| format!("?{i}"));
                self.out.push_str(&name);
            }
            TermKind::Free(n) => self.out.push_str(n),
            TermKind::Const(c) => self.out.push_str(c.name()),
            TermKind::Cont(s) => {
                self.out.push_str("k[");
                let saved = std::mem::take(&mut self.scope);
                self.stack(s);
                self.scope = saved;
                self.out.push(']');
            }
            TermKind::Lam(..) => {
                let paren = ctx != Ctx::Top;
                if paren {
                    self.out.push('(');
                }
                let depth = self.scope.len();
                let mut names = Vec::new();
                let mut cur = t;
                while let TermKind::Lam(h, b) = cur.kind() {
                    let n = self.pick(h);
                    self.scope.push(n.clone());
                    names.push(n);
                    cur = b;
                }
                self.out.push('\\');
                if names.iter().all(|n| n.len() == 1) {
                    self.out.push_str(&names.concat());
                } else {
                    self.out.push_str(&names.join(" "));
                }
                self.out.push('.');
                self.term(cur, Ctx::Top);
                self.scope.truncate(depth);
                if paren {
                    self.out.push(')');
                }
            }
            TermKind::App(..) => {
                let paren = ctx == Ctx::Arg;
                if paren {
                    self.out.push('(');
                }
                let mut spine = Vec::new();
                let mut cur = t;
                while let TermKind::App(f, a) = cur.kind() {
                    if decode_numeral(cur).is_some() {
                        break;
                    }
                    spine.push(a);
                    cur = f;
                }
                self.term(cur, Ctx::Head);
                for a in spine.into_iter().rev() {
                    self.out.push(' ');
                    self.term(a, Ctx::Arg);
                }
                if paren {
                    self.out.push(')');
                }
            }
        }
    }

    fn stack(&mut self, s: &Stack) {
        let mut cur = s;
        loop {
            match cur.kind() {
                StackKind::Bottom(a) => {
                    self.out.push_str(a.name());
                    return;
                }
                StackKind::Push(t, r) => {
                    self.term(t, Ctx::Head);
                    self.out.push_str(" . ");
                    cur = r;
                }
            }
        }
    }
}

pub fn print_term(t: &Term) -> String {
    let mut p = Printer::new();
    collect_names(t, &mut p.taken);
    p.term(t, Ctx::Top);
    p.out
}

pub fn print_stack(s: &Stack) -> String {
    let mut p = Printer::new();
    for t in s.terms() {
        collect_names(&t, &mut p.taken);
    }
    p.stack(s);
    p.out
}

pub fn print_process(proc_: &Process) -> String {
    let mut p = Printer::new();
    collect_names(&proc_.head, &mut p.taken);
    for t in proc_.stack.terms() {
        collect_names(&t, &mut p.taken);
    }
    p.term(&proc_.head, Ctx::Head);
    p.out.push_str(" * ");
    p.stack(&proc_.stack);
    p.out
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_stack(self))
    }
}

impl fmt::Debug for Stack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_stack(self))
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_process(self))
    }
}

impl fmt::Debug for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_process(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_process, parse_term, Registry};

    #[test]
    fn prints_readably() {
        let reg = Registry::standard();
        let p = |s| print_term(&parse_term(s, &reg).unwrap());
        assert_eq!(p("\\x.x"), "\\x.x");
        assert_eq!(p("\\nxf.f(nxf)"), "\\nxf.f (n x f)");
        assert_eq!(p("(\\x.x)(\\x.x)"), "(\\x.x) (\\x.x)");
        assert_eq!(p("\\x.\\x.x"), "\\x x1.x1");
        assert_eq!(p("#3"), "#3");
        assert_eq!(p("k[c0 c1 . a0]"), "k[c0 c1 . a0]");
        let q = parse_process("cc * (\\x.x).a0", &reg).unwrap();
        assert_eq!(q.to_string(), "cc * (\\x.x) . a0");
    }

    #[test]
    fn reparse_nested_binders() {
        let reg = Registry::standard();
        for src in ["\\x.\\x.x", "\\x y.\\x.y x", "\\c.c0 c", "k[(\\x.x) . a0] (\\y.y)"] {
            let t = parse_term(src, &reg).unwrap();
            assert_eq!(parse_term(&print_term(&t), &reg).unwrap(), t, "{src}");
        }
    }
}
