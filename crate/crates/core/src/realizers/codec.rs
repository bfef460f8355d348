//! Tuple and history encodings: cons-lists built with the pairing
//! `\xyf.f x y` and the empty list `\xf.x` (which is also `#0`).

use std::sync::OnceLock;

use crate::syntax::{decode_numeral, numeral, zero, Stack, Term, TermKind};

/// `\x y f. f x y`
pub fn pairing() -> Term {
    static PAIR: OnceLock<Term> = OnceLock::new();
    PAIR.get_or_init(|| {
        let body = Term::apps(Term::free("f"), [Term::free("x"), Term::free("y")]);
        Term::lams(&["x", "y", "f"], body)
    })
    .clone()
}

pub fn nil() -> Term {
    zero()
}

pub fn cons(head: Term, tail: Term) -> Term {
    Term::apps(pairing(), [head, tail])
}

pub fn encode_list<I>(items: I) -> Term
where
    I: IntoIterator<Item = Term>,
    I::IntoIter: DoubleEndedIterator,
{
    items.into_iter().rev().fold(nil(), |acc, t| cons(t, acc))
}

pub fn decode_list(t: &Term) -> Option<Vec<Term>> {
    let (p, z) = (pairing(), nil());
    let mut out = Vec::new();
    let mut cur = t.clone();
    loop {
        if cur == z {
            return Some(out);
        }
        let (f, tail) = cur.as_app()?;
        let (pf, head) = f.as_app()?;
        if *pf != p {
            return None;
        }
        out.push(head.clone());
        cur = tail.clone();
    }
}

/// `<m1, .., mk>` as a list of literal numerals.
pub fn encode_tuple(v: &[u64]) -> Term {
    encode_list(v.iter().map(|&n| numeral(n)).collect::<Vec<_>>())
}

pub fn decode_tuple(t: &Term) -> Option<Vec<u64>> {
    decode_list(t)?.iter().map(decode_numeral).collect()
}

/// One recorded position `(m, n, u, pi)` of the history.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistEntry {
    pub m: Vec<u64>,
    pub n: Vec<u64>,
    pub u: Term,
    pub pi: Stack,
}

impl HistEntry {
    pub fn encode(&self) -> Term {
        encode_list([
            encode_tuple(&self.m),
            encode_tuple(&self.n),
            self.u.clone(),
            Term::cont(self.pi.clone()),
        ])
    }

    pub fn decode(t: &Term) -> Option<HistEntry> {
        let items = decode_list(t)?;
        if items.len() != 4 {
            return None;
        }
        let pi = match items[3].kind() {
            TermKind::Cont(s) => s.clone(),
            _ => return None,
        };
        Some(HistEntry {
            m: decode_tuple(&items[0])?,
            n: decode_tuple(&items[1])?,
            u: items[2].clone(),
            pi,
        })
    }
}

/// The history as a list of entries, newest first.
pub fn encode_history(entries: &[HistEntry]) -> Term {
    encode_list(entries.iter().map(HistEntry::encode).collect::<Vec<_>>())
}

pub fn decode_history(t: &Term) -> Option<Vec<HistEntry>> {
    decode_list(t)?.iter().map(HistEntry::decode).collect()
}

/// At most one recorded answer `(n, u, pi)` per tuple `m`.
pub fn is_functional(entries: &[HistEntry]) -> bool {
    entries.iter().enumerate().all(|(i, e)| {
        entries[i + 1..]
            .iter()
            .all(|f| f.m != e.m || (f.n == e.n && f.u == e.u && f.pi == e.pi))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_stack, parse_term, Registry};

    #[test]
    fn tuples_roundtrip() {
        for v in [vec![], vec![0], vec![3, 1, 4], vec![0, 0, 7, 2]] {
            assert_eq!(decode_tuple(&encode_tuple(&v)), Some(v));
        }
        assert_eq!(decode_tuple(&numeral(2)), None);
        assert_eq!(decode_tuple(&zero()), Some(vec![]));
    }

    #[test]
    fn history_roundtrip() {
        let reg = Registry::standard();
        let e = |m: Vec<u64>, n: Vec<u64>| HistEntry {
            m,
            n,
            u: parse_term("c0", &reg).unwrap(),
            pi: parse_stack("c1 . a0", &reg).unwrap(),
        };
        let h = vec![e(vec![1], vec![2]), e(vec![], vec![])];
        assert_eq!(decode_history(&encode_history(&h)), Some(h.clone()));
        assert!(is_functional(&h));
        let mut bad = h.clone();
        bad.push(e(vec![1], vec![3]));
        assert!(!is_functional(&bad));
    }
}
