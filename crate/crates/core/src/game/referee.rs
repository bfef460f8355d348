use std::collections::{HashSet, VecDeque};

use super::abelard::{Abelard, Handle, MoveRequest};
use super::{Game, History, MatchMove, MatchOutcome, MoveEvent, Reason, Segment, Verdict};
use crate::formula::ArithFormula;
use crate::machine::Machine;
use crate::syntax::{numeral, Process, Registry, Stack, Term};
use crate::Error;

/// Step budgets of a match.
#[derive(Clone, Debug)]
pub struct MatchConfig {
    /// Steps allowed between two moves (G1).
    pub phase_budget: u64,
    /// Steps allowed over the whole match.
    pub total_budget: u64,
    /// Steps per scheduler slice (G2).
    pub quantum: u64,
    /// Keep every visited process in the transcript.
    pub record: bool,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            phase_budget: 100_000,
            total_budget: 1_000_000,
            quantum: 256,
            record: false,
        }
    }
}

impl MatchConfig {
    pub fn with_budget(steps: u64) -> MatchConfig {
        MatchConfig {
            phase_budget: steps,
            total_budget: steps,
            ..MatchConfig::default()
        }
    }
}

struct Setup {
    handle: Handle,
    psi: ArithFormula,
    start: Process,
}

fn setup(
    realizer: &Term,
    reg: &Registry,
    phi: &ArithFormula,
    abelard: &mut dyn Abelard,
) -> Result<(Setup, History), Error> {
    if !realizer.is_closed() {
        return Err(Error::NotClosed);
    }
    if !realizer.is_proof_like() {
        return Err(Error::Config("the realizer contains a continuation constant".into()));
    }
    if !reg.is_deterministic() {
        return Err(Error::Config("matches need a deterministic machine (no fork)".into()));
    }
    let handle = abelard.handle(reg, phi.g)?;
    if !handle.u.is_closed() {
        return Err(Error::NotClosed);
    }
    let psi = phi.close(&handle.z)?;
    let args: Vec<Term> = handle
        .z
        .iter()
        .map(|&z| numeral(z))
        .chain([handle.u.clone()])
        .collect();
    let start = Process::new(realizer.clone(), Stack::push_all(args, handle.pi.clone()));
    let history = History::new(phi.h, handle.u.clone(), handle.pi.clone());
    Ok((Setup { handle, psi, start }, history))
}

struct Referee<'a> {
    game: Game,
    reg: &'a Registry,
    abelard: &'a mut dyn Abelard,
    history: History,
    moves: Vec<MatchMove>,
    segments: Vec<Segment>,
    steps: u64,
}

enum Played {
    Next(Process),
    NoAnswer,
}

impl Referee<'_> {
    fn play(&mut self, thread: usize, entry: usize, m: u64, t: Term) -> Result<Played, Error> {
        let req = MoveRequest {
            game: self.game,
            registry: self.reg,
            history: self.history.entries(),
            entry,
            m,
            t: &t,
        };
        let Some(answer) = self.abelard.answer(&req)? else {
            return Ok(Played::NoAnswer);
        };
        if !answer.u.is_closed() {
            return Err(Error::NotClosed);
        }
        let created = self
            .history
            .extend(entry, m, answer.n, answer.u.clone(), answer.pi.clone());
        let next = Process::new(
            t.clone(),
            Stack::push_all([numeral(answer.n), answer.u.clone()], answer.pi.clone()),
        );
        self.moves.push(MatchMove {
            entry,
            m,
            t,
            answer,
            created,
            thread,
            step: self.steps,
        });
        Ok(Played::Next(next))
    }

    fn finish(self, s: Setup, verdict: Verdict, note: Option<&str>) -> MatchOutcome {
        MatchOutcome {
            game: self.game,
            formula: s.psi.name.clone(),
            verdict,
            handle: s.handle,
            history: self.history.entries().to_vec(),
            moves: self.moves,
            segments: self.segments,
            steps: self.steps,
            note: note.map(String::from),
        }
    }
}

const NO_ANSWER: &str = "abelard has no answer left";

/// Referee for G1: a single current position, Eloise plays eagerly at the
/// first detected move.
pub fn play_g1(
    realizer: &Term,
    reg: &Registry,
    phi: &ArithFormula,
    abelard: &mut dyn Abelard,
    cfg: &MatchConfig,
) -> Result<MatchOutcome, Error> {
    let (s, history) = setup(realizer, reg, phi, abelard)?;
    let mut machine = Machine::new(reg);
    let mut r = Referee {
        game: Game::G1,
        reg,
        abelard,
        history,
        moves: Vec::new(),
        segments: Vec::new(),
        steps: 0,
    };
    let mut cur = s.start.clone();
    loop {
        let mut seg = Segment::new(0, cur.clone());
        seg.observe(&cur, cfg.record);
        let mut phase = 0;
        let event = loop {
            if let Some(ev) = r.history.referee_move(&cur, &s.psi) {
                break Ok(ev);
            }
            if phase >= cfg.phase_budget || r.steps >= cfg.total_budget {
                break Err(Reason::Budget);
            }
            let Some((rule, next)) = machine.step_one(&cur) else {
                break Err(Reason::Stuck);
            };
            phase += 1;
            r.steps += 1;
            seg.rules.push(rule);
            seg.observe(&next, cfg.record);
            cur = next;
        };
        r.segments.push(seg);
        match event {
            Err(reason) => return Ok(r.finish(s, Verdict::AbelardWin { reason }, None)),
            Ok(MoveEvent::Win { entry }) => return Ok(r.finish(s, Verdict::EloiseWin { entry }, None)),
            Ok(MoveEvent::Play { entry, m, t }) => match r.play(0, entry, m, t)? {
                Played::Next(p) => cur = p,
                Played::NoAnswer => {
                    let v = Verdict::AbelardWin { reason: Reason::Budget };
                    return Ok(r.finish(s, v, Some(NO_ANSWER)));
                }
            },
        }
    }
}

struct Thread {
    cur: Process,
    seen: HashSet<Process>,
    visited: Vec<Process>,
    live: bool,
}

impl Thread {
    fn new(p: Process) -> Thread {
        Thread {
            cur: p.clone(),
            seen: HashSet::from([p.clone()]),
            visited: vec![p],
            live: true,
        }
    }
}

/// Referee for G2: every existential position ever reached stays live and
/// is advanced by a round-robin scheduler, newest process first. A new
/// history entry is also checked against every process visited so far.
pub fn play_g2(
    realizer: &Term,
    reg: &Registry,
    phi: &ArithFormula,
    abelard: &mut dyn Abelard,
    cfg: &MatchConfig,
) -> Result<MatchOutcome, Error> {
    let (s, history) = setup(realizer, reg, phi, abelard)?;
    let mut machine = Machine::new(reg);
    let mut r = Referee {
        game: Game::G2,
        reg,
        abelard,
        history,
        moves: Vec::new(),
        segments: Vec::new(),
        steps: 0,
    };
    let quantum = cfg.quantum.max(1);
    let mut threads = vec![Thread::new(s.start.clone())];
    let mut pending: VecDeque<(usize, MoveEvent)> = VecDeque::new();
    if let Some(ev) = r.history.referee_move(&s.start, &s.psi) {
        pending.push_back((0, ev));
    }
    let mut next_slot = 0usize;
    loop {
        while let Some((th, ev)) = pending.pop_front() {
            let (entry, m, t) = match ev {
                MoveEvent::Win { entry } => return Ok(r.finish(s, Verdict::EloiseWin { entry }, None)),
                MoveEvent::Play { entry, m, t } => (entry, m, t),
            };
            if r.steps >= cfg.total_budget {
                return Ok(r.finish(s, Verdict::AbelardWin { reason: Reason::Budget }, None));
            }
            let p = match r.play(th, entry, m, t)? {
                Played::Next(p) => p,
                Played::NoAnswer => {
                    let v = Verdict::AbelardWin { reason: Reason::Budget };
                    return Ok(r.finish(s, v, Some(NO_ANSWER)));
                }
            };
            let e = r.history.len() - 1;
            let id = threads.len();
            if let Some(ev) = r.history.referee_move(&p, &s.psi) {
                pending.push_back((id, ev));
            }
            // Former positions may now match the new entry.
            for (k, old) in threads.iter().enumerate() {
                for q in &old.visited {
                    match r.history.events_for(e, q) {
                        Some(MoveEvent::Win { entry }) if !r.history.is_true(entry, &s.psi) => {}
                        Some(ev) => pending.push_back((k, ev)),
                        None => {}
                    }
                }
            }
            threads.push(Thread::new(p));
            next_slot = threads.len() - 1;
        }
        // Newest first, wrapping around.
        let n = threads.len();
        let Some(k) = (0..n)
            .map(|d| (next_slot + n - d) % n)
            .find(|&k| threads[k].live)
        else {
            return Ok(r.finish(s, Verdict::AbelardWin { reason: Reason::Stuck }, None));
        };
        next_slot = (k + n - 1) % n;
        let th = &mut threads[k];
        let mut seg = Segment::new(k, th.cur.clone());
        for _ in 0..quantum {
            if r.steps >= cfg.total_budget {
                r.segments.push(seg);
                return Ok(r.finish(s, Verdict::AbelardWin { reason: Reason::Budget }, None));
            }
            let Some((rule, q)) = machine.step_one(&th.cur) else {
                th.live = false;
                break;
            };
            r.steps += 1;
            seg.rules.push(rule);
            seg.observe(&q, cfg.record);
            if !th.seen.insert(q.clone()) {
                // A cycle brings nothing new.
                th.live = false;
                break;
            }
            th.visited.push(q.clone());
            th.cur = q;
            if let Some(ev) = r.history.referee_move(&th.cur, &s.psi) {
                pending.push_back((k, ev));
                break;
            }
        }
        r.segments.push(seg);
    }
}
