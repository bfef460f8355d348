//! Recursive-descent parser for the concrete syntax:
//!
//! ```text
//! term    := '\' ident+ '.' term | atom+
//! atom    := ident | '(' term ')' | 'k[' stack ']' | '#' nat
//! stack   := term '.' stack | ident
//! process := term '*' stack
//! ```
//!
//! An identifier is resolved as a bound variable, then as a declared
//! constant; failing both, a purely alphabetic identifier is read as a run
//! of one-letter names (`xx` is `x x`, `\nxf.` binds three variables).

use super::numeral::numeral;
use super::registry::{Decl, Registry};
use super::term::{Name, Process, Stack, Term};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Lambda,
    Dot,
    Star,
    LParen,
    RParen,
    KOpen,
    RBracket,
    Hash(u64),
    Ident(String),
    Eof,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, Error> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, ch)) = it.peek() {
        let single = match ch {
            '\\' | 'λ' => Some(Tok::Lambda),
            '.' | '·' => Some(Tok::Dot),
            '*' | '⋆' => Some(Tok::Star),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ']' => Some(Tok::RBracket),
            _ => None,
        };
        if let Some(t) = single {
            it.next();
            out.push((t, pos));
            continue;
        }
        if ch.is_whitespace() {
            it.next();
        } else if ch == '#' {
            it.next();
            let mut digits = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                digits.push(d);
                it.next();
            }
            let n = digits.parse::<u64>().map_err(|_| Error::Parse {
                pos,
                msg: "expected a natural number after `#`".into(),
            })?;
            out.push((Tok::Hash(n), pos));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut id = String::new();
            while let Some(&(_, d)) = it.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                id.push(d);
                it.next();
            }
            if id == "k" && matches!(it.peek(), Some(&(_, '['))) {
                it.next();
                out.push((Tok::KOpen, pos));
            } else {
                out.push((Tok::Ident(id), pos));
            }
        } else {
            return Err(Error::Parse {
                pos,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

fn splittable(id: &str) -> bool {
    id.len() > 1 && id.bytes().all(|b| b.is_ascii_alphabetic())
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    reg: &'a Registry,
    scope: Vec<Name>,
    open: bool,
}

impl<'a> Parser<'a> {
    fn new(src: &str, reg: &'a Registry, open: bool) -> Result<Self, Error> {
        Ok(Parser {
            toks: tokenize(src)?,
            at: 0,
            reg,
            scope: Vec::new(),
            open,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), Error> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn finish(&mut self) -> Result<(), Error> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("unexpected trailing input")
        }
    }

    fn term(&mut self) -> Result<Term, Error> {
        if *self.peek() == Tok::Lambda {
            return self.lambda();
        }
        let mut acc: Option<Term> = None;
        loop {
            match self.peek() {
                Tok::Lambda => {
                    let l = self.lambda()?;
                    acc = Some(match acc {
                        Some(f) => Term::app(f, l),
                        None => l,
                    });
                    break;
                }
                Tok::Ident(_) | Tok::LParen | Tok::KOpen | Tok::Hash(_) => {
                    for a in self.atom()? {
                        acc = Some(match acc {
                            Some(f) => Term::app(f, a),
                            None => a,
                        });
                    }
                }
                _ => break,
            }
        }
        match acc {
            Some(t) => Ok(t),
            None => self.error("expected a term"),
        }
    }

    fn lambda(&mut self) -> Result<Term, Error> {
        self.expect(Tok::Lambda, "`\\`")?;
        let mut names: Vec<Name> = Vec::new();
        while let Tok::Ident(id) = self.peek().clone() {
            self.bump();
            if splittable(&id) {
                names.extend(id.chars().map(|c| Name::from(c.to_string())));
            } else {
                names.push(Name::from(id));
            }
        }
        if names.is_empty() {
            return self.error("expected a binder name");
        }
        self.expect(Tok::Dot, "`.` after binders")?;
        let depth = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let body = self.term();
        self.scope.truncate(depth);
        let body = body?;
        Ok(names
            .into_iter()
            .rev()
            .fold(body, |acc, n| Term::lam_raw(n, acc)))
    }

    /// One syntactic atom; a split identifier yields several.
    fn atom(&mut self) -> Result<Vec<Term>, Error> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(id) => self.resolve(&id, pos),
            Tok::Hash(n) => Ok(vec![numeral(n)]),
            Tok::LParen => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(vec![t])
            }
            Tok::KOpen => {
                let saved = std::mem::take(&mut self.scope);
                let s = self.stack();
                self.scope = saved;
                let s = s?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(vec![Term::cont(s)])
            }
            _ => unreachable!("caller checked the token"),
        }
    }

    fn resolve_one(&self, id: &str) -> Option<Result<Term, Error>> {
        if let Some(i) = self.scope.iter().rev().position(|n| &**n == id) {
            return Some(Ok(Term::bound(i as u32)));
        }
        match self.reg.lookup(id) {
            Some(Decl::Term(c)) => Some(Ok(Term::constant(&c))),
            Some(Decl::Stack(_)) => Some(Err(Error::Parse {
                pos: 0,
                msg: format!("stack constant `{id}` used as a term"),
            })),
            None => None,
        }
    }

    fn resolve(&self, id: &str, pos: usize) -> Result<Vec<Term>, Error> {
        let fix = |e: Error| match e {
            Error::Parse { msg, .. } => Error::Parse { pos, msg },
            e => e,
        };
        if let Some(r) = self.resolve_one(id) {
            return r.map(|t| vec![t]).map_err(fix);
        }
        if splittable(id) {
            let letters: Option<Result<Vec<Term>, Error>> = id
                .chars()
                .map(|c| self.resolve_one(&c.to_string()))
                .collect();
            if let Some(r) = letters {
                return r.map_err(fix);
            }
        }
        if self.open {
            Ok(vec![Term::free(id)])
        } else {
            Err(Error::UnknownConstant(id.to_string()))
        }
    }

    fn stack(&mut self) -> Result<Stack, Error> {
        let mut terms = Vec::new();
        loop {
            if let Tok::Ident(id) = self.peek().clone() {
                if let Some(Decl::Stack(a)) = self.reg.lookup(&id) {
                    self.bump();
                    return Ok(Stack::push_all(terms, Stack::bottom(&a)));
                }
            }
            let open = std::mem::replace(&mut self.open, false);
            let t = self.term();
            self.open = open;
            terms.push(t?);
            if *self.peek() != Tok::Dot {
                return self.error("expected `.` or a stack constant");
            }
            self.bump();
        }
    }
}

/// Parse a closed term; every identifier must be bound or declared.
pub fn parse_term(src: &str, reg: &Registry) -> Result<Term, Error> {
    let mut p = Parser::new(src, reg, false)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse a term in which unknown identifiers become free variables.
pub fn parse_term_open(src: &str, reg: &Registry) -> Result<Term, Error> {
    let mut p = Parser::new(src, reg, true)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_stack(src: &str, reg: &Registry) -> Result<Stack, Error> {
    let mut p = Parser::new(src, reg, false)?;
    let s = p.stack()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_process(src: &str, reg: &Registry) -> Result<Process, Error> {
    let mut p = Parser::new(src, reg, false)?;
    let head = p.term()?;
    p.expect(Tok::Star, "`*`")?;
    let stack = p.stack()?;
    p.finish()?;
    Ok(Process::new(head, stack))
}
