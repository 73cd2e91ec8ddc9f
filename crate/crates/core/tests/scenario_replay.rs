use std::fs;
use std::path::{Path, PathBuf};

use autfn_core::scenario::{self, DiagKind, RunOptions, Status};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run(src: &str) -> scenario::ReplayReport {
    scenario::run_source(src, "t", &RunOptions::default())
}

#[test]
fn corpus_replays_clean() {
    let r = scenario::replay_all(&corpus(), &RunOptions::default());
    let fails: Vec<String> = r.failures().map(|f| format!("{}: {} [{}]", f.scenario, f.assertion, f.detail)).collect();
    assert!(fails.is_empty(), "{fails:#?}");
    assert!(r.count(Status::Pass) > 400);
    // Nothing in the corpus depends on which way chains are read by accident.
    for rec in &r.records {
        assert!(!rec.detail.contains("reversed reading: pass"), "{}: {}", rec.scenario, rec.assertion);
    }
}

#[test]
fn corpus_lints_clean() {
    assert_eq!(scenario::lint(&corpus()), Vec::<String>::new());
}

#[test]
fn print_then_parse_round_trips() {
    for path in scenario::scenario_files(&corpus()).unwrap() {
        let src = fs::read_to_string(&path).unwrap();
        let file = scenario::parse(&src).unwrap();
        let printed = scenario::print(&file);
        let again = scenario::parse(&printed).unwrap_or_else(|d| panic!("{}: {d}\n{printed}", path.display()));
        assert_eq!(again, file, "{}", path.display());
        assert_eq!(scenario::print(&again), printed);
    }
}

#[test]
fn replay_is_deterministic_across_thread_counts() {
    let opts = RunOptions::default();
    let base = scenario::replay_all(&corpus(), &opts);
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let r = pool.install(|| scenario::replay_all(&corpus(), &opts));
        assert_eq!(r, base);
    }
    assert_eq!(scenario::replay_all(&corpus(), &opts).to_json(), base.to_json());
}

#[test]
fn empty_directory_succeeds() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("empty-scenarios");
    fs::create_dir_all(&dir).unwrap();
    let r = scenario::replay_all(&dir, &RunOptions::default());
    assert!(r.records.is_empty());
    assert!(r.success());
}

#[test]
fn failing_fixture_has_exactly_one_failure() {
    let r = scenario::replay_all(&fixtures().join("failing"), &RunOptions::default());
    assert_eq!(r.count(Status::Fail), 1);
    assert_eq!(r.count(Status::Pass), 3);
    let f = r.failures().next().unwrap();
    assert_eq!(f.assertion, "L(x1, x2) == R(x1, x2)");
    assert_eq!(f.anchor, "a deliberately wrong identity");
    assert!(!r.success());
    assert!(scenario::lint(&fixtures().join("failing")).is_empty());
}

#[test]
fn lint_reports_missing_anchors() {
    let problems = scenario::lint(&fixtures().join("unanchored"));
    assert!(problems.iter().any(|p| p.contains("plain.scn") && p.contains("anchor")));
    assert!(problems.iter().any(|p| p.contains("anchors.txt")));
}

#[test]
fn json_report_has_the_documented_fields() {
    let r = run("# anchor: a\nscenario \"s\"\nrank 2\nassert P(x1, x2)^2 == id\nnote \"hello\"\n");
    let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 2);
    for key in ["scenario", "assertion", "status", "detail", "anchor"] {
        assert!(recs[0].get(key).is_some(), "{key}");
    }
    assert_eq!(recs[0]["status"], "pass");
    assert_eq!(recs[0]["anchor"], "a");
    assert_eq!(recs[1]["status"], "note");
}

#[test]
fn reversed_reading_is_flagged() {
    // Read right to left, x1 -> x2 x1; read left to right it would be x2^-1 x1.
    let r = run("scenario \"s\"\nrank 2\nassert apply(L(x1, x2) * I(x2), x1) == x2 x1\n");
    assert_eq!(r.count(Status::Pass), 1);
    assert!(r.records[0].detail.contains("reversed reading: fail"), "{}", r.records[0].detail);
    let sym = run("scenario \"s\"\nrank 2\nassert P(x1, x2) * P(x1, x2) == id\n");
    assert!(!sym.records[0].detail.contains("reversed"));
}

#[test]
fn parameters_expand_to_labelled_instances() {
    let r = run("scenario \"s\"\nparam p = 2, 3\nparam k = 1\nrank 4\nassert order(P(x1, x[p])) == 2\n");
    let names: Vec<&str> = r.records.iter().map(|r| r.scenario.as_str()).collect();
    assert_eq!(names, ["s[p=2,k=1]", "s[p=3,k=1]"]);
}

#[test]
fn large_assertions_are_skipped_by_default() {
    let src = "scenario \"s\"\nrank 2\nassert large P(x1, x2) * P(x1, x2) == id\n";
    assert_eq!(run(src).count(Status::Skip), 1);
    let opts = RunOptions { include_large: true, ..RunOptions::default() };
    assert_eq!(scenario::run_source(src, "t", &opts).count(Status::Pass), 1);
}

#[test]
fn static_errors_are_classified() {
    let cases = [
        ("scenario \"s\"\nrank 2\nassert f == id\n", DiagKind::UndefinedName),
        ("scenario \"s\"\nrank 2\nassert apply(id, x3) == x3\n", DiagKind::RankMismatch),
        ("scenario \"s\"\nrank 2\nassert P(x1 x2) == id\n", DiagKind::Syntax),
        ("scenario \"s\"\nrank 2\naut f { x1 -> x2; }\naut g = f f\n", DiagKind::Syntax),
    ];
    for (src, kind) in cases {
        match scenario::parse(src) {
            Err(d) => assert_eq!(d.kind, kind, "{src}: {d}"),
            Ok(_) => panic!("accepted: {src}"),
        }
    }
}

#[test]
fn syntax_errors_carry_position_and_expectations() {
    let d = scenario::parse("scenario \"s\"\nrank 2\nassert order(P(x1, x2)) ==\n").unwrap_err();
    assert_eq!(d.kind, DiagKind::Syntax);
    assert_eq!(d.pos.line, 4);
    assert!(!d.expected.is_empty());
}

#[test]
fn broken_graph_automorphism_is_invalid() {
    let src = "scenario \"s\"\ngraph X { vertex a b; edge e a b; loop l a; }\ngaut t on X { e -> l; l -> e; }\n";
    let d = scenario::parse(src).unwrap_err();
    assert_eq!(d.kind, DiagKind::Invalid, "{d}");
}

#[test]
fn parse_failure_becomes_one_failing_record() {
    let r = run("scenario \"s\"\nrank 2\nassert ==\n");
    assert_eq!(r.records.len(), 1);
    assert_eq!(r.records[0].status, Status::Fail);
    assert_eq!(r.records[0].assertion, "parse");
}
