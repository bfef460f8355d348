//! Turing machines over the alphabet {blank, 0, 1}, enumerated by size.
//!
//! A table with `k` states has `3k` cells, one per (state, symbol), stored
//! state-major. Each cell is either `halt` or an action (write, move, next
//! state), so it has `1 + 6k` possible values: digit 0 is `halt` and digit
//! `1 + ((write * 2 + move) * k + next)` an action. Tables with `k` states
//! occupy the index range starting at `sum_{j<k} (1 + 6j)^(3j)`, read as a
//! little-endian mixed-radix number. Sizes 1 to 4 are enumerated, so index 0
//! is the one-state machine that halts at once.

use super::primrec::PrimRecFn;
use crate::Error;

pub const MAX_STATES: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Halt,
    /// Symbols: 0 blank, 1 for `0`, 2 for `1`.
    Act { write: u8, dir: Move, next: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    states: usize,
    cells: Vec<Cell>,
}

fn base(k: usize) -> u128 {
    1 + 6 * k as u128
}

fn block(k: usize) -> u128 {
    base(k).pow(3 * k as u32)
}

/// Number of enumerated tables.
pub fn table_count() -> u64 {
    (1..=MAX_STATES).map(block).sum::<u128>() as u64
}

impl TuringMachine {
    /// `cells[3 * state + symbol]`.
    pub fn new(states: usize, cells: Vec<Cell>) -> Result<Self, Error> {
        if states == 0 || states > MAX_STATES || cells.len() != 3 * states {
            return Err(Error::Config("malformed Turing table".into()));
        }
        for c in &cells {
            if let Cell::Act { write, next, .. } = c {
                if *write > 2 || *next >= states {
                    return Err(Error::Config("malformed Turing cell".into()));
                }
            }
        }
        Ok(TuringMachine { states, cells })
    }

    pub fn from_index(m: u64) -> Result<Self, Error> {
        let mut rest = m as u128;
        for k in 1..=MAX_STATES {
            if rest < block(k) {
                let b = base(k);
                let cells = (0..3 * k)
                    .map(|_| {
                        let d = (rest % b) as usize;
                        rest /= b;
                        if d == 0 {
                            return Cell::Halt;
                        }
                        let d = d - 1;
                        let next = d % k;
                        let dir = if (d / k).is_multiple_of(2) { Move::Left } else { Move::Right };
                        Cell::Act {
                            write: (d / k / 2) as u8,
                            dir,
                            next,
                        }
                    })
                    .collect();
                return Ok(TuringMachine { states: k, cells });
            }
            rest -= block(k);
        }
        Err(Error::OutOfRange(format!("Turing machine index {m}")))
    }

    pub fn index(&self) -> u64 {
        let k = self.states;
        let b = base(k);
        let offset: u128 = (1..k).map(block).sum();
        let within = self.cells.iter().rev().fold(0u128, |acc, c| {
            let d = match c {
                Cell::Halt => 0,
                Cell::Act { write, dir, next } => {
                    let mv = if *dir == Move::Left { 0 } else { 1 };
                    1 + ((*write as usize * 2 + mv) * k + next)
                }
            };
            acc * b + d as u128
        });
        (offset + within) as u64
    }

    pub fn states(&self) -> usize {
        self.states
    }

    /// Number of transitions performed before halting on the empty tape, if
    /// that happens within `max_steps`.
    pub fn halting_step(&self, max_steps: u64) -> Option<u64> {
        // right[i] is cell i, left[i] is cell -1-i.
        let (mut left, mut right) = (Vec::<u8>::new(), vec![0u8]);
        let (mut pos, mut state) = (0i64, 0usize);
        let mut steps = 0u64;
        loop {
            let sym = if pos >= 0 {
                right.get(pos as usize).copied().unwrap_or(0)
            } else {
                left.get((-1 - pos) as usize).copied().unwrap_or(0)
            };
            match self.cells[3 * state + sym as usize] {
                Cell::Halt => return Some(steps),
                Cell::Act { write, dir, next } => {
                    if steps == max_steps {
                        return None;
                    }
                    let slot = if pos >= 0 {
                        let i = pos as usize;
                        if i >= right.len() {
                            right.resize(i + 1, 0);
                        }
                        &mut right[i]
                    } else {
                        let i = (-1 - pos) as usize;
                        if i >= left.len() {
                            left.resize(i + 1, 0);
                        }
                        &mut left[i]
                    };
                    *slot = write;
                    pos += if dir == Move::Left { -1 } else { 1 };
                    state = next;
                    steps += 1;
                }
            }
        }
    }
}

/// 1 if machine `m` halts on the empty tape strictly before `n` steps.
pub fn halt(m: u64, n: u64) -> Result<u64, Error> {
    let tm = TuringMachine::from_index(m)?;
    Ok(match n {
        0 => 0,
        _ => u64::from(tm.halting_step(n - 1).is_some()),
    })
}

/// Total version of [`halt`]: indices past the enumeration never halt.
fn halt_total(m: u64, n: u64) -> bool {
    halt(m, n).unwrap_or(0) == 1
}

/// `f(m, n, p) = 0` iff `(n > 0 and Halt(m, n))` or `(n = 0 and not Halt(m, p))`.
pub fn f_h() -> PrimRecFn {
    PrimRecFn::native("f_H", 3, |a| {
        let (m, n, p) = (a[0], a[1], a[2]);
        let ok = (n > 0 && halt_total(m, n)) || (n == 0 && !halt_total(m, p));
        u64::from(!ok)
    })
}

/// `f(m, n) = 0` iff `Halt(m, n)`; the test behind the t_H Theta instruction.
pub fn halt0() -> PrimRecFn {
    PrimRecFn::native("halt0", 2, |a| u64::from(!halt_total(a[0], a[1])))
}

/// The two-state machine that halts after exactly three steps.
pub fn m3() -> TuringMachine {
    use Cell::*;
    let one_r_q1 = Act {
        write: 2,
        dir: Move::Right,
        next: 1,
    };
    let one_l_q0 = Act {
        write: 2,
        dir: Move::Left,
        next: 0,
    };
    TuringMachine::new(2, vec![one_r_q1, Halt, one_r_q1, one_l_q0, Halt, Halt])
        .expect("well-formed table")
}

/// The one-state machine that runs right forever over blanks.
pub fn m_loop() -> TuringMachine {
    let cell = Cell::Act {
        write: 0,
        dir: Move::Right,
        next: 0,
    };
    TuringMachine::new(1, vec![cell, Cell::Halt, Cell::Halt]).expect("well-formed table")
}
