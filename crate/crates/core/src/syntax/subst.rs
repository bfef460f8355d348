use super::term::{ConstKind, Constant, Process, Stack, StackConst, StackKind, Term, TermKind};
use crate::Error;

/// Syntactic identity up to alpha, continuations included.
pub fn alpha_eq(t1: &Term, t2: &Term) -> bool {
    t1 == t2
}

/// `t{x:=u}`. Stops at continuations, whose stacks are closed.
pub fn subst_var(t: &Term, x: &str, u: &Term) -> Term {
    t.replace_free(x, u)
}

/// Things the constant substitutions apply to: terms, stacks and processes.
pub trait Subject: Sized {
    #[doc(hidden)]
    fn replace_const(&self, c: &Constant, u: &Term) -> Self;
    #[doc(hidden)]
    fn replace_stack_const(&self, a: &StackConst, pi: &Stack) -> Self;
}

/// `s{c:=u}` for an inert constant `c` and a closed `u`, continuations included.
pub fn subst_const<S: Subject>(s: &S, c: &Constant, u: &Term) -> Result<S, Error> {
    if !matches!(c.kind(), ConstKind::Inert { .. }) {
        return Err(Error::NotInert(c.name().to_string()));
    }
    if !u.is_closed() {
        return Err(Error::NotClosed);
    }
    Ok(s.replace_const(c, u))
}

/// `s{a:=pi}`, continuations included.
pub fn subst_stack_const<S: Subject>(s: &S, a: &StackConst, pi: &Stack) -> S {
    s.replace_stack_const(a, pi)
}

impl Term {
    fn replace_free(&self, x: &str, u: &Term) -> Term {
        if !self.has_free() {
            return self.clone();
        }
        match self.kind() {
            TermKind::Free(n) if &**n == x => u.clone(),
            TermKind::Lam(h, b) => Term::lam_raw(h.clone(), b.replace_free(x, u)),
            TermKind::App(f, a) => Term::app(f.replace_free(x, u), a.replace_free(x, u)),
            _ => self.clone(),
        }
    }
}

impl Subject for Term {
    fn replace_const(&self, c: &Constant, u: &Term) -> Term {
        if !self.may_contain_const(c.id()) {
            return self.clone();
        }
        match self.kind() {
            TermKind::Const(d) if d == c => u.clone(),
            TermKind::Lam(h, b) => Term::lam_raw(h.clone(), b.replace_const(c, u)),
            TermKind::App(f, a) => Term::app(f.replace_const(c, u), a.replace_const(c, u)),
            TermKind::Cont(s) => Term::cont(s.replace_const(c, u)),
            _ => self.clone(),
        }
    }

    fn replace_stack_const(&self, a: &StackConst, pi: &Stack) -> Term {
        if !self.may_contain_stack_const(a.id()) {
            return self.clone();
        }
        match self.kind() {
            TermKind::Lam(h, b) => Term::lam_raw(h.clone(), b.replace_stack_const(a, pi)),
            TermKind::App(f, g) => {
                Term::app(f.replace_stack_const(a, pi), g.replace_stack_const(a, pi))
            }
            TermKind::Cont(s) => Term::cont(s.replace_stack_const(a, pi)),
            _ => self.clone(),
        }
    }
}

/// Rebuild a stack, mapping each pushed term; the untouched suffix is shared.
fn map_stack(
    s: &Stack,
    touched: impl Fn(&Stack) -> bool,
    term: impl Fn(&Term) -> Term,
    bottom: impl Fn(&StackConst) -> Stack,
) -> Stack {
    let mut prefix = Vec::new();
    let mut cur = s.clone();
    let base = loop {
        if !touched(&cur) {
            break cur;
        }
        let next = match cur.kind() {
            StackKind::Bottom(b) => break bottom(b),
            StackKind::Push(t, r) => {
                prefix.push(term(t));
                r.clone()
            }
        };
        cur = next;
    };
    prefix.into_iter().rev().fold(base, |acc, t| Stack::push(t, acc))
}

impl Subject for Stack {
    fn replace_const(&self, c: &Constant, u: &Term) -> Stack {
        map_stack(
            self,
            |s| s.may_contain_const(c.id()),
            |t| t.replace_const(c, u),
            Stack::bottom,
        )
    }

    fn replace_stack_const(&self, a: &StackConst, pi: &Stack) -> Stack {
        map_stack(
            self,
            |s| s.may_contain_stack_const(a.id()),
            |t| t.replace_stack_const(a, pi),
            |b| if b == a { pi.clone() } else { Stack::bottom(b) },
        )
    }
}

impl Subject for Process {
    fn replace_const(&self, c: &Constant, u: &Term) -> Process {
        Process::new(self.head.replace_const(c, u), self.stack.replace_const(c, u))
    }

    fn replace_stack_const(&self, a: &StackConst, pi: &Stack) -> Process {
        Process::new(
            self.head.replace_stack_const(a, pi),
            self.stack.replace_stack_const(a, pi),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_process, parse_stack, parse_term, parse_term_open, Registry};

    #[test]
    fn subst_var_examples() {
        let reg = Registry::standard();
        let i = parse_term("\\x.x", &reg).unwrap();
        let t = parse_term_open("\\y.x y", &reg).unwrap();
        assert_eq!(subst_var(&t, "x", &i), parse_term("\\y.(\\x.x) y", &reg).unwrap());
        let cc = parse_term("cc", &reg).unwrap();
        assert_eq!(subst_var(&Term::free("x"), "x", &cc), cc);
        assert_eq!(subst_var(&i, "x", &cc), i);
    }

    #[test]
    fn subst_const_examples() {
        let reg = Registry::standard();
        let c = reg.constant("c0").unwrap();
        let i = parse_term("\\x.x", &reg).unwrap();
        let k = parse_term("k[c0.a0]", &reg).unwrap();
        assert_eq!(
            subst_const(&k, &c, &i).unwrap(),
            parse_term("k[(\\x.x).a0]", &reg).unwrap()
        );
        let c1 = parse_term("c1", &reg).unwrap();
        assert_eq!(subst_const(&c1, &c, &i).unwrap(), c1);
        let s = parse_stack("c0 c1 . c0 . a1", &reg).unwrap();
        assert_eq!(
            subst_const(&s, &c, &i).unwrap(),
            parse_stack("(\\x.x) c1 . (\\x.x) . a1", &reg).unwrap()
        );
        let cc = reg.constant("cc").unwrap();
        assert!(matches!(subst_const(&k, &cc, &i), Err(Error::NotInert(_))));
    }

    #[test]
    fn subst_stack_const_examples() {
        let reg = Registry::standard();
        let a0 = reg.stack_const("a0").unwrap();
        let pi0 = parse_stack("c0 . a2", &reg).unwrap();
        let s = parse_stack("a0", &reg).unwrap();
        assert_eq!(subst_stack_const(&s, &a0, &pi0), pi0);
        let s1 = parse_stack("a1", &reg).unwrap();
        assert_eq!(subst_stack_const(&s1, &a0, &pi0), s1);
        let p = parse_process("k[c1 . a0] * c2 . a0", &reg).unwrap();
        assert_eq!(
            subst_stack_const(&p, &a0, &pi0),
            parse_process("k[c1 . c0 . a2] * c2 . c0 . a2", &reg).unwrap()
        );
    }

    #[test]
    fn alpha_examples() {
        let reg = Registry::standard();
        let p = |s| parse_term(s, &reg).unwrap();
        assert!(alpha_eq(&p("\\x.x"), &p("\\y.y")));
        assert!(!alpha_eq(&p("\\x.x"), &p("(\\x.x)(\\x.x)")));
        assert!(alpha_eq(&p("k[(\\x.x).a0]"), &p("k[(\\y.y).a0]")));
    }
}
