use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn krivine(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krivine"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env_remove("KRIVINE_STEPS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn eval_examples() {
    let out = krivine(&["eval", r"(\x.x) * ((\x.xx)(\x.xx)).a0", "--steps", "10"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("cycle(entry 1, period 2)"));
    let out = krivine(&["eval", r"(\x.x)(\x.x) * a0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "stuck");
    assert_eq!(v["steps"], 2);
    assert_eq!(v["last"], r"(\x.x) * a0");
    let out = krivine(&["eval", "cc * (\\x.x).a0", "--trace", "--steps", "1"]);
    assert!(stdout(&out).contains(r"step 1: (\x.x) * k[a0] . a0"));
    let out = krivine(&["eval", "cc * (\\x.x"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error at byte"));
}

#[test]
fn step_budget_from_the_environment() {
    let run = |env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_krivine"));
        cmd.args(["eval", r"(\x.x x (\y.y)) (\x.x x (\y.y)) * a0", "--format", "json"]);
        match env {
            Some(v) => cmd.env("KRIVINE_STEPS", v),
            None => cmd.env_remove("KRIVINE_STEPS"),
        };
        let v: serde_json::Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        v["steps"].as_u64().unwrap()
    };
    assert_eq!(run(Some("9")), 9);
    assert_eq!(run(None), 100_000);
}

#[test]
fn match_exit_codes() {
    let wild = ["--realizer", "t_leq", "--formula", "leq", "--abelard", "fixtures/wild.json"];
    let g1 = krivine(&[&["match", "--game", "g1"][..], &wild].concat());
    assert_eq!(code(&g1), 1);
    assert!(stdout(&g1).contains("verdict: AbelardWin(stuck)"));
    let g2 = krivine(&[&["match", "--game", "g2"][..], &wild].concat());
    assert_eq!(code(&g2), 0);
    assert!(stdout(&g2).contains("verdict: EloiseWin(entry 1)"));
    let out = krivine(&[
        "match", "--game", "g1", "--realizer", "t_phi_leq", "--formula", "leq", "--abelard", "random", "--seed", "7",
    ]);
    assert_eq!(code(&out), 0);
    let out = krivine(&["match", "--game", "g1", "--realizer", "toy", "--formula", "leq", "--abelard", "fresh", "--answers", "4"]);
    assert_eq!(code(&out), 0);
    let out = krivine(&["match", "--game", "g0", "--formula", "phi4", "--bound", "3"]);
    assert_eq!(code(&out), 0);
    let out = krivine(&["match", "--game", "g0", "--formula", "false"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn configuration_errors_exit_2() {
    for args in [
        &["match", "--game", "g1", "--formula", "leq"][..],
        &["match", "--game", "g1", "--realizer", "nope", "--formula", "leq", "--abelard", "fresh"],
        &["match", "--game", "g1", "--realizer", "toy", "--formula", "nope", "--abelard", "fresh"],
        &["match", "--game", "g1", "--realizer", "toy", "--formula", "leq", "--abelard", "missing.json"],
        &["match", "--game", "g3", "--formula", "leq"],
        &["scheme", "--realizer", "t_leq", "--formula", "leq", "--answers", "4"],
        &["oracle", "--formula", "leq"],
    ] {
        assert_eq!(code(&krivine(args)), 2, "{args:?}");
    }
}

#[test]
fn scheme_and_oracle() {
    let out = krivine(&["scheme", "--realizer", "toy", "--formula", "leq", "--answers", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().filter(|l| l.contains(" > ")).count(), 2);
    let out = krivine(&["scheme", "--realizer", "fig_mock", "--formula", "phi4", "--answers", "1,0,1,0,0,1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let paths: Vec<_> = v["nodes"].as_array().unwrap().iter().map(|n| n["path"].clone()).collect();
    assert_eq!(serde_json::json!(paths), serde_json::json!([[], [0], [1], [1, 0], [1, 1], [2], [0, 0]]));
    let out = krivine(&["scheme", "--realizer", "fig_mock", "--formula", "phi4", "--answers", "1,0"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("failure: budget"));
    let out = krivine(&["scheme", "--realizer", "fig_mock", "--formula", "phi4", "--answers", "1,0,1,0,0,1", "--dot"]);
    assert!(stdout(&out).starts_with("digraph"));
    assert_eq!(code(&krivine(&["oracle", "--formula", "leq", "--bound", "5"])), 0);
    assert_eq!(code(&krivine(&["oracle", "--formula", "phi4", "--bound", "3"])), 0);
    let out = krivine(&["oracle", "--formula", "false", "--bound", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("lose"));
}

#[test]
fn json_output_is_deterministic() {
    let runs = [
        &["match", "--game", "g2", "--realizer", "t_phi_phi4", "--formula", "phi4", "--abelard", "random", "--seed", "3", "--format", "json"][..],
        &["match", "--game", "g1", "--realizer", "t_leq", "--formula", "leq", "--abelard", "fresh", "--format", "json"],
        &["scheme", "--realizer", "fig_mock", "--formula", "phi4", "--answers", "1,0,1,0,0,1", "--format", "json"],
        &["list", "--format", "json"],
    ];
    for args in runs {
        let (a, b) = (krivine(args), krivine(args));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn formula_and_library_files() {
    let dir = tempfile::tempdir().unwrap();
    let formulas = dir.path().join("formulas.json");
    std::fs::write(&formulas, r#"[{"name": "le2", "h": 1, "fn": {"native": "leq"}}]"#).unwrap();
    let library = dir.path().join("library.json");
    std::fs::write(&library, r#"[{"name": "t_phi_le2", "native": "t_phi", "formula": "le2"}]"#).unwrap();
    let (f, l) = (path(&formulas), path(&library));
    let out = krivine(&[
        "--formulas", f, "--library", l, "match", "--game", "g1", "--realizer", "t_phi_le2", "--formula", "le2",
        "--abelard", "random",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = krivine(&["--formulas", f, "list"]);
    assert!(stdout(&out).contains("le2"));
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn interactive_abelard() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_krivine"))
        .args(["match", "--game", "g1", "--realizer", "toy", "--formula", "leq", "--abelard", "interactive"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // A bad term first, then the handle, then one answer.
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"(\\x.\nc0\na0\n3\nc1\na1\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("try again"));
    assert!(stdout(&out).contains("abelard answers 3 with c1 * a1"));
}
