use std::path::PathBuf;
use std::process::{Command, Output};

fn programs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs")
}

fn rtpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtpl"))
        .args(args)
        .env_remove("RTPL_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn choice() -> String {
    programs().join("choice.rtpl").display().to_string()
}

#[test]
fn run_prints_final_configuration() {
    let o = rtpl(&["run", &choice(), "--script", "a[1];s[2]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("a[1].s_[2].0 + s[2].0"));
}

#[test]
fn run_then_undo_restores_the_program() {
    let o = rtpl(&["run", &choice(), "--script", "a[1];s[2];~s[2];~a[1]"]);
    assert_eq!(stdout(&o).lines().next(), Some("a.0 + s.0"));
}

#[test]
fn trace_replays_to_the_same_state() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.json");
    let t = trace.display().to_string();
    let o = rtpl(&["run", &choice(), "--script", "s;a;~a", "--trace-out", &t]);
    assert_eq!(o.status.code(), Some(0));
    let last = stdout(&o).trim().to_string();
    let r = rtpl(&["replay", &t]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r).trim(), last);
}

#[test]
fn empty_input_is_a_syntax_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("empty.rtpl");
    std::fs::write(&f, "").unwrap();
    let o = rtpl(&["parse", &f.display().to_string()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_prints_canonical_form() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("p.rtpl");
    std::fs::write(&f, "A = a.A;\n( A |'a.0 )").unwrap();
    let o = rtpl(&["parse", &f.display().to_string()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "A = a.A;\nA | 'a.0");
}

#[test]
fn bad_script_and_missing_move() {
    assert_eq!(rtpl(&["run", &choice(), "--script", "a[x]"]).status.code(), Some(2));
    assert_eq!(rtpl(&["run", &choice(), "--script", "b"]).status.code(), Some(2));
    assert_eq!(rtpl(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn steps_lists_the_forced_synchronisation() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("t.rtpl");
    std::fs::write(&f, "[(a | 'a)](b)").unwrap();
    let o = rtpl(&["steps", &f.display().to_string(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let acts: Vec<&str> = v["transitions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["act"].as_str().unwrap())
        .collect();
    assert_eq!(acts.iter().filter(|a| **a == "tau").count(), 1);
    assert!(!acts.contains(&"s"));
}

#[test]
fn steps_matrix_is_symmetric() {
    let o = rtpl(&["steps", &choice(), "--config", "a[1].0 + s.0 | b.0", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = v["conflict"].as_array().unwrap();
    for (i, row) in m.iter().enumerate() {
        for (j, c) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(c, &m[j][i]);
        }
    }
}

#[test]
fn corpus_checks_clean() {
    let corpus = programs().join("corpus").display().to_string();
    let o = rtpl(&["check", &corpus, "--suite", "all", "--depth", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("seed 0"));
}

#[test]
fn seed_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_rtpl"))
        .args(["check", &choice(), "--suite", "pl", "--json"])
        .env("RTPL_SEED", "42")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["reports"][0]["seed"], 42);
}

#[test]
fn ghost_free_variant_fails() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.rtpl");
    std::fs::write(&f, "s.a.0 | b.s.0").unwrap();
    let p = f.display().to_string();
    assert_eq!(rtpl(&["check", &p, "--suite", "loop"]).status.code(), Some(0));
    let o = rtpl(&["check", &p, "--suite", "loop", "--ghost-free"]);
    assert_eq!(o.status.code(), Some(1));
    let o = rtpl(&["check", &p, "--suite", "order", "--ghost-free"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn examples_pass() {
    let o = rtpl(&["examples"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS ")));
}
