use super::*;
use crate::machine::{Machine, Rule, Status};
use crate::syntax::{decode_numeral, parse_stack, Process, Stack};

fn reaches(reg: &Registry, from: &Process, goal: &Process, budget: usize) -> bool {
    let mut m = Machine::new(reg);
    let tr = m.run(from, budget, &mut [&mut |q: &Process| q == goal]);
    matches!(tr.status, Status::Watcher { .. })
}

fn fresh(reg: &Registry) -> (Term, Stack) {
    (
        Term::constant(&reg.fresh_constant("k")),
        Stack::bottom(&reg.fresh_stack_constant("a")),
    )
}

#[test]
fn identity_like_on_constants() {
    let reg = Registry::standard();
    for (name, t) in identity_like(&reg) {
        let (u, pi) = fresh(&reg);
        let p = Process::new(t, Stack::push(u.clone(), pi.clone()));
        assert!(reaches(&reg, &p, &Process::new(u, pi), 50), "{name}");
    }
}

#[test]
fn delta_prime_grows() {
    let reg = Registry::standard();
    let dp = delta_prime();
    let p = Process::new(Term::app(dp.clone(), dp), parse_stack("a0", &reg).unwrap());
    let mut m = Machine::new(&reg);
    let tr = m.run(&p, 300, &mut []);
    for k in 0..=100 {
        assert_eq!(tr.entries[3 * k].process.stack.len(), k, "after {} steps", 3 * k);
    }
}

#[test]
fn storage_contract() {
    let reg = Registry::standard();
    let st = storage_operator();
    let i = identity();
    let nus = [
        (numeral(3), 3),
        (Term::app(i.clone(), numeral(3)), 3),
        (Term::app(Term::lam("x", Term::app(Term::free("x"), numeral(3))), i.clone()), 3),
        (Term::app(succ(), Term::app(i.clone(), numeral(2))), 3),
        (numeral(0), 0),
        (numeral(12), 12),
    ];
    for (nu, n) in nus {
        let (f, pi) = fresh(&reg);
        let p = Process::new(st.clone(), Stack::push_all([f.clone(), nu.clone()], pi.clone()));
        let goal = Process::new(f, Stack::push(numeral(n), pi));
        assert!(reaches(&reg, &p, &goal, 500), "nu = {nu}");
    }
}

#[test]
fn t_h_contracts() {
    let reg = Registry::standard();
    let t_h = build_t_h(&reg).unwrap();
    let looping = turing::m_loop().index();
    let halting = turing::m3().index();
    for (m, p, halts) in [(looping, 7, false), (halting, 5, true), (halting, 2, false)] {
        let mut mach = Machine::new(&reg);
        let (u, pi) = fresh(&reg);
        let start = Process::new(t_h.clone(), Stack::push_all([numeral(m), u.clone()], pi.clone()));
        let t = t_h_continuation(&reg, &numeral(m), &u, &Term::cont(pi.clone()));
        let first = Process::new(u.clone(), Stack::push_all([numeral(0), t.clone()], pi.clone()));
        let tr = mach.run(&start, 50, &mut [&mut |q: &Process| *q == first]);
        assert!(matches!(tr.status, Status::Watcher { .. }));

        let (u2, pi2) = fresh(&reg);
        let reply = Process::new(t, Stack::push_all([numeral(p), u2.clone()], pi2.clone()));
        let goal = if halts {
            let k = Term::lams(&["p", "v"], Term::free("v"));
            Process::new(u, Stack::push_all([numeral(p), k], pi))
        } else {
            Process::new(u2, pi2)
        };
        let tr = mach.run(&reply, 50, &mut [&mut |q: &Process| *q == goal]);
        assert!(matches!(tr.status, Status::Watcher { .. }), "m={m} p={p}");
        assert_eq!(halts, tr.rules().any(|r| *r == Rule::Restore));
    }
}

#[test]
fn t_leq_contracts() {
    let reg = quoting_registry();
    let t = build_t_leq(&reg).unwrap();
    let mut m = Machine::new(&reg);
    let (u, pi) = fresh(&reg);
    let start = Process::new(t, Stack::push(u.clone(), pi.clone()));
    let code = numeral(0);
    let t2 = t_leq_t2(&reg, &t_leq_t1(&reg, &u, &code), &code);
    let first = Process::new(u.clone(), Stack::push_all([numeral(0), t2.clone()], pi.clone()));
    let tr = m.run(&start, 50, &mut [&mut |q: &Process| *q == first]);
    assert!(matches!(tr.status, Status::Watcher { .. }));
    assert!(tr.contains(&Process::new(t_leq_t0(&reg, &u, &code), pi.clone())));

    // A fresh reply is handed straight back.
    let (u2, pi2) = fresh(&reg);
    let reply = Process::new(t2.clone(), Stack::push_all([numeral(4), u2.clone()], pi2.clone()));
    let goal = Process::new(u2.clone(), pi2);
    assert!(matches!(m.run(&reply, 50, &mut [&mut |q: &Process| *q == goal]).status, Status::Watcher { .. }));

    // Same stack, different term: handed back too.
    let reply = Process::new(t2.clone(), Stack::push_all([numeral(4), u2.clone()], pi.clone()));
    let goal = Process::new(u2, pi.clone());
    assert!(matches!(m.run(&reply, 50, &mut [&mut |q: &Process| *q == goal]).status, Status::Watcher { .. }));

    // The replayed position is detected.
    let t0 = t_leq_t0(&reg, &u, &code);
    let reply = Process::new(t2, Stack::push_all([numeral(0), t0], pi.clone()));
    let goal = Process::new(identity(), pi);
    assert!(matches!(m.run(&reply, 50, &mut [&mut |q: &Process| *q == goal]).status, Status::Watcher { .. }));
}

#[test]
fn t_leq_requires_instructions() {
    assert!(build_t_leq(&Registry::standard()).is_err());
}

#[test]
fn toy_plays_zero() {
    let reg = Registry::standard();
    let (u, pi) = fresh(&reg);
    let p = Process::new(toy(), Stack::push(u.clone(), pi.clone()));
    let k = Term::lams(&["n", "v"], Term::free("v"));
    let goal = Process::new(u, Stack::push_all([numeral(0), k], pi));
    assert!(reaches(&reg, &p, &goal, 10));
}

#[test]
fn mock_follows_its_shape() {
    let reg = Registry::standard();
    let mut m = Machine::new(&reg);
    let mut kappas = vec![Term::constant(&reg.fresh_constant("k"))];
    let mut alphas = vec![Stack::bottom(&reg.fresh_stack_constant("a"))];
    let mut p = Process::new(fig_mock(), Stack::push(kappas[0].clone(), alphas[0].clone()));
    for i in 0..FIG_TARGETS.len() {
        let tr = m.run(&p, 200, &mut []);
        assert_eq!(tr.status, Status::Stuck);
        let last = tr.last().clone();
        let j = FIG_TARGETS[i];
        assert_eq!(last.head, kappas[j]);
        let (args, rest) = last.stack.split(2).unwrap();
        assert_eq!(rest, alphas[j]);
        assert_eq!(decode_numeral(&args[0]), Some(FIG_MOVES[i]));
        kappas.push(Term::constant(&reg.fresh_constant("k")));
        alphas.push(Stack::bottom(&reg.fresh_stack_constant("a")));
        let stack = Stack::push_all([numeral(FIG_ANSWERS[i]), kappas[i + 1].clone()], alphas[i + 1].clone());
        p = Process::new(args[1].clone(), stack);
    }
    let tr = m.run(&p, 200, &mut []);
    assert_eq!(*tr.last(), Process::new(kappas[FIG_FINAL].clone(), alphas[FIG_FINAL].clone()));
}

#[test]
fn library_entries_are_closed_and_proof_like() {
    let lib = Library::new().unwrap();
    for e in lib.entries() {
        assert!(e.term.is_closed(), "{}", e.name);
        assert!(e.term.is_proof_like(), "{}", e.name);
    }
    for name in ["t_H", "t_leq", "t_phi_leq", "t_phi_phi4", "toy", "fig_mock", "storage", "cc_kIdk"] {
        lib.get(name).unwrap();
    }
    assert!(lib.get("t_leq").unwrap().registry.has_instruction("quote"));
    assert!(!lib.get("t_H").unwrap().registry.has_instruction("quote"));
}

#[test]
fn manifest_loading() {
    let mut lib = Library::new().unwrap();
    let names = lib
        .load_manifest(
            r#"[
                {"name": "K", "term": "\\x y.x"},
                {"name": "probe", "term": "\\u.quote (\\n.u n)", "extras": ["quote"], "formula": "leq"},
                {"name": "t_phi_true", "native": "t_phi", "formula": "true"}
            ]"#,
        )
        .unwrap();
    assert_eq!(names, ["K", "probe", "t_phi_true"]);
    assert!(lib.get("probe").unwrap().registry.has_instruction("quote"));
    assert!(lib.load_manifest(r#"{"name": "bad", "term": "k[a0]"}"#).is_err());
    assert!(lib.load_manifest(r#"{"name": "open", "term": "x"}"#).is_err());
    assert!(lib.load_manifest(r#"{"name": "K", "term": "\\x.x"}"#).is_err());
    assert!(lib.load_manifest(r#"{"name": "n", "native": "nope"}"#).is_err());
}
