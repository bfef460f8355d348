use super::abelard::{Abelard, Fresh, RandomAbelard, Script, Scripted};
use super::referee::{play_g1, play_g2, MatchConfig};
use super::{Game, MatchOutcome};
use crate::formula::ArithFormula;
use crate::syntax::{Registry, Term};
use crate::Error;

/// A reproducible adversary: building it twice gives the same strategy.
/// The adversary also supplies the handle.
#[derive(Clone, Debug)]
pub enum AbelardSpec {
    Scripted(Script),
    Fresh(Vec<u64>),
    Random(u64),
}

impl AbelardSpec {
    pub fn build(&self) -> Box<dyn Abelard> {
        match self {
            AbelardSpec::Scripted(s) => Box::new(Scripted::new(s.clone())),
            AbelardSpec::Fresh(ns) => Box::new(Fresh::new(ns.clone())),
            AbelardSpec::Random(seed) => Box::new(RandomAbelard::new(*seed)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AbelardSpec::Scripted(_) => "scripted".into(),
            AbelardSpec::Fresh(ns) => format!("fresh{ns:?}"),
            AbelardSpec::Random(seed) => format!("random({seed})"),
        }
    }
}

pub struct CheckRow {
    pub adversary: String,
    pub game: Game,
    pub outcome: MatchOutcome,
}

pub struct CheckReport {
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    pub fn all_won(&self) -> bool {
        self.rows.iter().all(|r| r.outcome.verdict.eloise_wins())
    }

    /// Matches Eloise lost; a `stuck` loss is a definitive counterexample.
    pub fn losses(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.outcome.verdict.eloise_wins())
    }
}

/// Play `realizer` against every adversary in the given games. Winning every
/// match is evidence only; a single loss is a counterexample.
pub fn check_strategy(
    realizer: &Term,
    reg: &Registry,
    phi: &ArithFormula,
    adversaries: &[AbelardSpec],
    games: &[Game],
    cfg: &MatchConfig,
) -> Result<CheckReport, Error> {
    let mut rows = Vec::new();
    for spec in adversaries {
        for &game in games {
            let mut abelard = spec.build();
            let outcome = match game {
                Game::G1 => play_g1(realizer, reg, phi, abelard.as_mut(), cfg)?,
                Game::G2 => play_g2(realizer, reg, phi, abelard.as_mut(), cfg)?,
            };
            rows.push(CheckRow {
                adversary: spec.label(),
                game,
                outcome,
            });
        }
    }
    Ok(CheckReport { rows })
}
