use std::sync::OnceLock;

use super::term::{Term, TermKind};

/// `0 = \x f. x`
pub fn zero() -> Term {
    static ZERO: OnceLock<Term> = OnceLock::new();
    ZERO.get_or_init(|| Term::lams(&["x", "f"], Term::free("x")))
        .clone()
}

/// `s = \n x f. f (n x f)`
pub fn succ() -> Term {
    static SUCC: OnceLock<Term> = OnceLock::new();
    SUCC.get_or_init(|| {
        let nxf = Term::apps(Term::free("n"), [Term::free("x"), Term::free("f")]);
        Term::lams(&["n", "x", "f"], Term::app(Term::free("f"), nxf))
    })
    .clone()
}

/// The literal numeral `s (s (... (s 0)))` with `n` applications.
pub fn numeral(n: u64) -> Term {
    let s = succ();
    let mut t = zero();
    for _ in 0..n {
        t = Term::app(s.clone(), t);
    }
    t
}

/// Inverse of [`numeral`], up to alpha. Beta-equal but non-literal forms
/// are rejected.
pub fn decode_numeral(t: &Term) -> Option<u64> {
    let (z, s) = (zero(), succ());
    let mut n = 0u64;
    let mut cur = t;
    loop {
        match cur.kind() {
            TermKind::App(f, a) if *f == s => {
                n += 1;
                cur = a;
            }
            TermKind::Lam(..) if *cur == z => return Some(n),
            _ => return None,
        }
    }
}
