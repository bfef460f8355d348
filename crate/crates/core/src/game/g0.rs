//! The abstract backtracking game on integers. Eloise picks a former
//! position and a new integer; Abelard answers with an integer. Eloise wins
//! once a complete position satisfies `f = 0`.

use crate::formula::{bounded_truth, ArithFormula};
use crate::realizers::enumerate::{index_of, next_tuple};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G0Position {
    pub m: Vec<u64>,
    pub n: Vec<u64>,
    pub parent: Option<usize>,
}

pub trait G0Eloise {
    /// `(position index, m)`, or `None` to give up.
    fn play(&mut self, phi: &ArithFormula, z: &[u64], history: &[G0Position]) -> Option<(usize, u64)>;
}

pub trait G0Abelard {
    fn leading(&mut self, phi: &ArithFormula) -> Vec<u64> {
        vec![0; phi.g]
    }
    /// Answer at the position `(m, n)` where `m` was just extended.
    fn answer(&mut self, phi: &ArithFormula, z: &[u64], m: &[u64], n: &[u64]) -> u64;
}

#[derive(Clone, Debug)]
pub struct G0Outcome {
    pub z: Vec<u64>,
    pub history: Vec<G0Position>,
    /// Index of the winning complete position.
    pub win: Option<usize>,
}

impl G0Outcome {
    pub fn eloise_wins(&self) -> bool {
        self.win.is_some()
    }
}

/// Play at most `max_moves` exchanges.
pub fn play_g0(
    phi: &ArithFormula,
    eloise: &mut dyn G0Eloise,
    abelard: &mut dyn G0Abelard,
    max_moves: usize,
) -> G0Outcome {
    let z = abelard.leading(phi);
    let mut history = vec![G0Position {
        m: vec![],
        n: vec![],
        parent: None,
    }];
    for _ in 0..max_moves {
        let Some((at, m)) = eloise.play(phi, &z, &history) else {
            break;
        };
        let Some(parent) = history.get(at).filter(|p| p.m.len() < phi.h) else {
            break;
        };
        let mut mv = parent.m.clone();
        mv.push(m);
        let n = abelard.answer(phi, &z, &mv, &parent.n);
        let mut nv = parent.n.clone();
        nv.push(n);
        let done = mv.len() == phi.h && phi.eval(&z, &mv, &nv).map(|v| v == 0).unwrap_or(false);
        history.push(G0Position {
            m: mv,
            n: nv,
            parent: Some(at),
        });
        if done {
            let win = Some(history.len() - 1);
            return G0Outcome { z, history, win };
        }
    }
    G0Outcome { z, history, win: None }
}

/// Eloise extends the position whose `m` is each scripted path minus its
/// last element, playing that last element.
pub struct ScriptedG0Eloise {
    pub paths: Vec<Vec<u64>>,
    next: usize,
}

impl ScriptedG0Eloise {
    pub fn new(paths: Vec<Vec<u64>>) -> Self {
        ScriptedG0Eloise { paths, next: 0 }
    }
}

impl G0Eloise for ScriptedG0Eloise {
    fn play(&mut self, _: &ArithFormula, _: &[u64], history: &[G0Position]) -> Option<(usize, u64)> {
        let path = self.paths.get(self.next)?;
        self.next += 1;
        let (last, init) = path.split_last()?;
        let at = history.iter().rposition(|p| p.m == init)?;
        Some((at, *last))
    }
}

pub struct ScriptedG0Abelard {
    pub answers: Vec<u64>,
    next: usize,
}

impl ScriptedG0Abelard {
    pub fn new(answers: Vec<u64>) -> Self {
        ScriptedG0Abelard { answers, next: 0 }
    }
}

impl G0Abelard for ScriptedG0Abelard {
    fn answer(&mut self, _: &ArithFormula, _: &[u64], _: &[u64], _: &[u64]) -> u64 {
        let n = self.answers.get(self.next).copied().unwrap_or(0);
        self.next += 1;
        n
    }
}

/// Eloise walking the fixed enumeration of `N^h`: for the current tuple she
/// extends the longest recorded prefix; tuples with a component above
/// `max` are skipped and she gives up after index `limit`.
pub struct BlindEloise {
    index: u64,
    pub max: Option<u64>,
    pub limit: u64,
}

impl BlindEloise {
    pub fn new(max: Option<u64>, limit: u64) -> Self {
        BlindEloise { index: 0, max, limit }
    }

    /// Restricted to `[0, bound + 1]^h`, the range of the bounded oracle.
    pub fn boxed(bound: u64, h: usize) -> Self {
        BlindEloise::new(Some(bound + 1), index_of(&vec![bound + 1; h]) + 1)
    }
}

impl G0Eloise for BlindEloise {
    fn play(&mut self, phi: &ArithFormula, _: &[u64], history: &[G0Position]) -> Option<(usize, u64)> {
        while self.index < self.limit {
            let t = next_tuple(self.index, phi.h);
            if self.max.is_some_and(|b| t.iter().any(|&x| x > b)) {
                self.index += 1;
                continue;
            }
            let (at, d) = (0..=phi.h)
                .rev()
                .find_map(|d| history.iter().rposition(|p| p.m == t[..d]).map(|i| (i, d)))
                .expect("the root matches the empty prefix");
            if d == phi.h {
                self.index += 1;
                continue;
            }
            return Some((at, t[d]));
        }
        None
    }
}

/// Abelard answering in `[0, bound]` so that the residual formula stays
/// false (bounded) whenever it can.
pub struct BoundedAbelard {
    pub bound: u64,
}

impl G0Abelard for BoundedAbelard {
    fn leading(&mut self, phi: &ArithFormula) -> Vec<u64> {
        let mut z = vec![0; phi.g];
        // First leading tuple (odometer order) at which the formula fails.
        let total = (self.bound + 1).pow(phi.g as u32);
        for k in 0..total {
            let mut r = k;
            for zi in z.iter_mut() {
                *zi = r % (self.bound + 1);
                r /= self.bound + 1;
            }
            if !bounded_truth(phi, &z, &mut vec![], &mut vec![], self.bound) {
                return z;
            }
        }
        vec![0; phi.g]
    }

    fn answer(&mut self, phi: &ArithFormula, z: &[u64], m: &[u64], n: &[u64]) -> u64 {
        (0..=self.bound)
            .find(|&y| {
                let mut nv = n.to_vec();
                nv.push(y);
                !bounded_truth(phi, z, &mut m.to_vec(), &mut nv, self.bound)
            })
            .unwrap_or(0)
    }
}
