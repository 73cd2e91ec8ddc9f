use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn autfn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autfn"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("run autfn")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(stdout(o).trim()).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn corpus_replays_with_exit_zero() {
    let o = autfn(&["replay", "scenarios"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
    assert_eq!(code(&autfn(&["lint", "scenarios"])), 0);
}

#[test]
fn failing_fixture_exits_one() {
    let o = autfn(&["replay", "crates/core/tests/fixtures/failing"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("3 passed, 1 failed"));
    let o = autfn(&["replay", "crates/core/tests/fixtures/failing", "--json"]);
    assert_eq!(code(&o), 1);
    let recs = json(&o);
    let fails: Vec<&Value> = recs.as_array().unwrap().iter().filter(|r| r["status"] == "fail").collect();
    assert_eq!(fails.len(), 1);
    assert_eq!(fails[0]["assertion"], "L(x1, x2) == R(x1, x2)");
}

#[test]
fn unanchored_directory_fails_lint() {
    let o = autfn(&["lint", "crates/core/tests/fixtures/unanchored"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(code(&autfn(&["run", "no-such-file.scn"])), 2);
    assert_eq!(code(&autfn(&["apply", "--rank", "2", "Q(x1)", "x1"])), 2);
    assert_eq!(code(&autfn(&["apply", "--rank", "2", "L(x1, x3)", "x1"])), 2);
    assert_eq!(code(&autfn(&["frobnicate"])), 2);

    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let bad = dir.join("bad-syntax.scn");
    std::fs::write(&bad, "scenario \"s\"\nrank 2\nassert ==\n").unwrap();
    let o = autfn(&["parse", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:8"));
}

#[test]
fn automorphism_queries() {
    let o = autfn(&["apply", "--rank", "2", "L(x1, x2)", "x1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "x2 x1");

    let o = autfn(&["inner", "--rank", "2", "C(x1, x2)"]);
    assert!(stdout(&o).contains("conjugation by x2"));

    let o = autfn(&["det", "--rank", "2", "P(x1, x2)"]);
    assert_eq!(stdout(&o).trim(), "-1");

    let o = autfn(&["abelianize", "--rank", "2", "L(x1, x2)", "--mod", "2"]);
    assert_eq!(stdout(&o).trim(), "[1 0; 1 1] mod 2");

    let o = autfn(&["order", "--rank", "3", "P(x1, x2) * P(x2, x3)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("order: 3"), "{}", stdout(&o));
}

#[test]
fn group_json_has_the_documented_fields() {
    let o = autfn(&["group", "--mod", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for key in ["op", "n", "modulus", "order", "result", "elapsed_ms"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["op"], "group");
    assert_eq!(v["n"], 3);
    assert_eq!(v["modulus"], 2);
    assert_eq!(v["order"], 168);
    assert_eq!(v["result"]["simple"], true);
}

#[test]
fn obstruction_rejects_small_n() {
    let o = autfn(&["obstruction", "4", "--json"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["result"]["status"], "rejected");
    let o = autfn(&["obstruction", "6"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verify: true"));
}

#[test]
fn kernel_json() {
    let o = autfn(&["kernel", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["op"], "kernel");
    assert_eq!(v["order"], 43008);
}

#[test]
fn realize_finds_the_defining_scenario() {
    let o = autfn(&["realize", "scenarios/examples.scn", "gt", "B", "--delta", "s1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "{ x1 -> x2; x2 -> x3; x3 -> x4 x1 x4^-1 }");
    let o = autfn(&["realize", "scenarios/out-rotations.scn", "ft", "B", "--delta", "s1", "--scenario", "rotation[p=5,m=3]"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("x5 -> x11 x1 x11^-1"));
    assert_eq!(code(&autfn(&["realize", "scenarios/examples.scn", "nope", "B"])), 2);
}
