use super::*;
use crate::formula::{turing, FormulaRegistry};
use crate::realizers::{self, Library};
use crate::syntax::{numeral, parse_process, parse_stack, parse_term, Registry};

fn wild_script(reg: &Registry) -> Script {
    let i = realizers::identity();
    let t0 = realizers::t_leq_t0(reg, &i, &numeral(0));
    Script {
        leading: vec![],
        handle: Some(ScriptMove::handle(&i, &parse_stack("a0", reg).unwrap())),
        moves: vec![ScriptMove {
            n: 0,
            u: t0.to_string(),
            pi: "a0".into(),
        }],
    }
}

fn formula(name: &str) -> ArithFormula {
    FormulaRegistry::builtin().get(name).unwrap()
}

#[test]
fn detect_move_examples() {
    let reg = Registry::standard();
    let i = realizers::identity();
    let a0 = parse_stack("a0", &reg).unwrap();
    let root = vec![HistoryEntry {
        m: vec![],
        n: vec![],
        u: i.clone(),
        pi: a0.clone(),
        parent: None,
    }];
    let p = parse_process(r"(\x.x) * #2 . c0 . a0", &reg).unwrap();
    let t = parse_term("c0", &reg).unwrap();
    assert_eq!(detect_move(&p, &root, 1), Some(MoveEvent::Play { entry: 0, m: 2, t }));
    let p = parse_process(r"(\x.x) * (\x.x x) . c0 . a0", &reg).unwrap();
    assert_eq!(detect_move(&p, &root, 1), None);
    let p = parse_process(r"(\x.x) * #2 . c0 . a1", &reg).unwrap();
    assert_eq!(detect_move(&p, &root, 1), None);
    let fin = vec![HistoryEntry {
        m: vec![0],
        n: vec![3],
        ..root[0].clone()
    }];
    let p = parse_process(r"(\x.x) * a0", &reg).unwrap();
    assert_eq!(detect_move(&p, &fin, 1), Some(MoveEvent::Win { entry: 0 }));
}

#[test]
fn wild_realizer_loses_g1_and_wins_g2() {
    let lib = Library::new().unwrap();
    let e = lib.get("t_leq").unwrap();
    let phi = formula("leq");
    let cfg = MatchConfig {
        record: true,
        ..MatchConfig::with_budget(100_000)
    };
    let script = wild_script(&e.registry);
    let g1 = play_g1(&e.term, &e.registry, &phi, &mut Scripted::new(script.clone()), &cfg).unwrap();
    assert_eq!(g1.verdict, Verdict::AbelardWin { reason: Reason::Stuck });
    assert_eq!(g1.moves.len(), 1);
    // The thread after the reply reaches neither u1 * pi1 nor a play at the root.
    let (root, u1) = (&g1.history[0], &g1.history[1]);
    let after = &g1.segments[1].processes;
    assert!(!after.contains(&Process::new(u1.u.clone(), u1.pi.clone())));
    assert!(!after.iter().any(|p| detect_move(p, &g1.history[..1], 1).is_some()));
    assert!(after.iter().all(|p| p.head != root.u || p.stack.len() < 2));
    let g2 = play_g2(&e.term, &e.registry, &phi, &mut Scripted::new(script), &cfg).unwrap();
    assert_eq!(g2.verdict, Verdict::EloiseWin { entry: 1 });
}

#[test]
fn halting_realizer() {
    let lib = Library::new().unwrap();
    let e = lib.get("t_H").unwrap();
    let phi = formula("halt");
    let cfg = MatchConfig::with_budget(10_000);
    let script = |m: u64, ps: &[u64]| Script {
        leading: vec![m],
        handle: None,
        moves: ps
            .iter()
            .enumerate()
            .map(|(i, &p)| ScriptMove {
                n: p,
                u: format!("c{i}"),
                pi: format!("a{i}"),
            })
            .collect(),
    };
    let looping = turing::m_loop().index();
    let out = play_g1(&e.term, &e.registry, &phi, &mut Scripted::new(script(looping, &[7])), &cfg).unwrap();
    assert!(out.verdict.eloise_wins(), "{}", out.to_text());
    assert_eq!(out.history.last().unwrap().m, vec![0]);

    let halting = turing::m3().index();
    let out = play_g1(&e.term, &e.registry, &phi, &mut Scripted::new(script(halting, &[5, 2])), &cfg).unwrap();
    assert!(out.verdict.eloise_wins(), "{}", out.to_text());
    assert_eq!(out.moves.len(), 2);
    assert_eq!(out.moves[1].m, 5);
    assert_eq!(out.moves[1].entry, 0);
    assert!(out.all_rules().any(|r| *r == crate::machine::Rule::Restore));
}

#[test]
fn universal_realizer_simple_win() {
    let lib = Library::new().unwrap();
    let e = lib.get("t_phi_leq").unwrap();
    let script = Script {
        moves: vec![ScriptMove {
            n: 0,
            u: "c1".into(),
            pi: "a1".into(),
        }],
        ..Script::default()
    };
    let out = play_g1(&e.term, &e.registry, &formula("leq"), &mut Scripted::new(script), &MatchConfig::default())
        .unwrap();
    assert_eq!(out.verdict, Verdict::EloiseWin { entry: 1 });
    assert_eq!(out.history[1].m, vec![0]);
}

#[test]
fn universal_realizer_backtracks_on_phi4() {
    let lib = Library::new().unwrap();
    let e = lib.get("t_phi_phi4").unwrap();
    let phi = formula("phi4");
    for seed in 0..5 {
        let out = play_g1(&e.term, &e.registry, &phi, &mut RandomAbelard::new(seed), &MatchConfig::default())
            .unwrap();
        assert!(out.verdict.eloise_wins(), "seed {seed}: {}", out.to_text());
    }
    assert_eq!(e.probe.as_ref().unwrap().violations(), 0);
    assert!(e.probe.as_ref().unwrap().firings() > 0);
}

#[test]
fn final_entry_gate() {
    let lib = Library::new().unwrap();
    let e = lib.get("toy").unwrap();
    let out = play_g1(&e.term, &e.registry, &formula("false"), &mut Fresh::new(vec![4]), &MatchConfig::default())
        .unwrap();
    assert_eq!(out.verdict, Verdict::AbelardWin { reason: Reason::Stuck });
    let out = play_g1(&e.term, &e.registry, &formula("leq"), &mut Fresh::new(vec![4]), &MatchConfig::default())
        .unwrap();
    assert_eq!(out.verdict, Verdict::EloiseWin { entry: 1 });
}

#[test]
fn exhausted_script_is_a_budget_loss() {
    let lib = Library::new().unwrap();
    let e = lib.get("t_leq").unwrap();
    let script = Script {
        moves: vec![],
        ..wild_script(&e.registry)
    };
    for game in [Game::G1, Game::G2] {
        let mut a = Scripted::new(script.clone());
        let out = match game {
            Game::G1 => play_g1(&e.term, &e.registry, &formula("leq"), &mut a, &MatchConfig::default()),
            Game::G2 => play_g2(&e.term, &e.registry, &formula("leq"), &mut a, &MatchConfig::default()),
        }
        .unwrap();
        assert_eq!(out.verdict, Verdict::AbelardWin { reason: Reason::Budget });
        assert!(out.note.is_some());
    }
}

#[test]
fn preconditions() {
    let reg = Registry::with_extras(&[crate::syntax::Extra::Fork]);
    let t = realizers::identity();
    let phi = formula("leq");
    assert!(play_g1(&t, &reg, &phi, &mut Fresh::new(vec![]), &MatchConfig::default()).is_err());
    let reg = Registry::standard();
    let open = Term::free("x");
    assert!(play_g1(&open, &reg, &phi, &mut Fresh::new(vec![]), &MatchConfig::default()).is_err());
    let cont = Term::cont(parse_stack("a0", &reg).unwrap());
    assert!(play_g2(&cont, &reg, &phi, &mut Fresh::new(vec![]), &MatchConfig::default()).is_err());
}

#[test]
fn transcripts_replay() {
    let lib = Library::new().unwrap();
    let e = lib.get("t_phi_phi4").unwrap();
    let phi = formula("phi4");
    let out = play_g1(&e.term, &e.registry, &phi, &mut RandomAbelard::new(3), &MatchConfig::default()).unwrap();
    assert!(out.verdict.eloise_wins());
    let script = Script::from_json(&out.script().to_json()).unwrap();
    let again = play_g1(&e.term, &e.registry, &phi, &mut Scripted::new(script.clone()), &MatchConfig::default())
        .unwrap();
    assert_eq!(again.verdict, out.verdict);
    assert_eq!(again.to_json()["history"], out.to_json()["history"]);
    let g2 = play_g2(&e.term, &e.registry, &phi, &mut Scripted::new(script), &MatchConfig::default()).unwrap();
    assert!(g2.verdict.eloise_wins());
}

#[test]
fn check_strategy_reports_the_wild_counterexample() {
    let lib = Library::new().unwrap();
    let e = lib.get("t_leq").unwrap();
    let mut suite = vec![AbelardSpec::Scripted(wild_script(&e.registry)), AbelardSpec::Fresh(vec![3])];
    suite.extend((0..10).map(AbelardSpec::Random));
    let report = check_strategy(
        &e.term,
        &e.registry,
        &formula("leq"),
        &suite,
        &[Game::G1, Game::G2],
        &MatchConfig::with_budget(100_000),
    )
    .unwrap();
    let losses: Vec<_> = report.losses().map(|r| (r.adversary.clone(), r.game)).collect();
    assert_eq!(losses, vec![("scripted".to_string(), Game::G1)]);
}

#[test]
fn g0_example_match() {
    let phi = formula("phi4");
    let mut eloise = ScriptedG0Eloise::new(vec![vec![0], vec![1], vec![1, 1], vec![1, 2], vec![2], vec![0, 2]]);
    let mut abelard = ScriptedG0Abelard::new(vec![1, 0, 1, 2, 0, 1]);
    let out = play_g0(&phi, &mut eloise, &mut abelard, 20);
    let w = out.win.expect("eloise wins");
    assert_eq!((out.history[w].m.clone(), out.history[w].n.clone()), (vec![0, 2], vec![1, 1]));
    assert_eq!(w, 6);
}

#[test]
fn g0_trivial_and_blind() {
    let t = formula("true");
    let out = play_g0(&t, &mut ScriptedG0Eloise::new(vec![vec![0]]), &mut ScriptedG0Abelard::new(vec![9]), 5);
    assert_eq!(out.win, Some(1));
    for (name, wins) in [("leq", true), ("phi4", true), ("false", false)] {
        let phi = formula(name);
        let mut eloise = BlindEloise::boxed(4, phi.h);
        let limit = eloise.limit as usize * phi.h + 1;
        let out = play_g0(&phi, &mut eloise, &mut BoundedAbelard { bound: 4 }, limit);
        assert_eq!(out.eloise_wins(), wins, "{name}");
    }
}

#[test]
fn json_is_deterministic() {
    let run = || {
        let lib = Library::new().unwrap();
        let e = lib.get("t_phi_leq").unwrap();
        play_g2(&e.term, &e.registry, &formula("leq"), &mut RandomAbelard::new(11), &MatchConfig::default())
            .unwrap()
            .to_json()
            .to_string()
    };
    assert_eq!(run(), run());
}
