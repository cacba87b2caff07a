use std::path::PathBuf;
use std::process::{Command, Output};

use polecalc::{CheckRecord, DecompositionReport};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polecalc")).args(args).output().unwrap()
}

fn run_on(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = data(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn check_pole_on_chain_and_n_poset() {
    let o = run_on("check-pole", "chain-3", &[]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("blocks: 1,1,1"));

    let o = run_on("check-pole", "n-poset", &[]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not a pole poset"));

    let o = run_on("check-pole", "square", &["--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pole"], true);
    assert_eq!(v["blocks"], serde_json::json!([1, 2, 1]));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name":"bad","size":2,"leq":["11","1"]}"#).unwrap();
    let o = run(&["check-pole", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 1"));

    let o = run(&["check-pole", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&o), 2);

    let antichain = dir.path().join("antichain.json");
    std::fs::write(&antichain, r#"{"name":"a2","size":2,"leq":["10","01"]}"#).unwrap();
    assert_eq!(code(&run(&["check-pole", antichain.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["decompose", antichain.to_str().unwrap()])), 2);
}

#[test]
fn decompose_summaries() {
    for (name, summary) in [
        ("square", "M_1(k) ⊕ M_3(k) ⊕ M_2(k) ⊕ M_1(kC2), dim 16"),
        ("chain-2", "M_1(k) ⊕ M_1(k), dim 2"),
        ("c1", "M_1(k), dim 1"),
    ] {
        let o = run_on("decompose", name, &[]);
        assert_eq!(code(&o), 0, "{name}");
        assert_eq!(stdout(&o).lines().last().unwrap(), summary);
    }
}

#[test]
fn decompose_json_round_trips() {
    for name in ["c1", "chain-3", "square", "m3", "n5"] {
        let text = stdout(&run_on("decompose", name, &["--json"]));
        let report: DecompositionReport = serde_json::from_str(&text).unwrap();
        assert!(report.consistent);
        assert_eq!(serde_json::to_string_pretty(&report).unwrap() + "\n", text);
    }
}

fn rank_rows(name: &str, m: usize) -> Vec<(i64, u64)> {
    let o = run_on("rank", name, &["--set-size", &m.to_string(), "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    v["rows"].as_array().unwrap().iter().map(|r| (r["rank"].as_i64().unwrap(), r["z_basis"].as_u64().unwrap())).collect()
}

#[test]
fn rank_tables() {
    assert_eq!(rank_rows("square", 2), vec![(0, 0), (0, 0), (2, 2)]);
    assert_eq!(rank_rows("chain-2", 1), vec![(0, 0), (1, 1)]);
    assert_eq!(rank_rows("c1", 3), vec![(1, 1); 4]);
    let o = run_on("rank", "n5", &[]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not a pole lattice"));
}

#[test]
fn verify_suites_and_exit_codes() {
    let o = run_on("verify", "square", &["--suite", "all", "--json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let records: Vec<CheckRecord> = serde_json::from_value(v["records"].clone()).unwrap();
    assert!(!records.is_empty() && records.iter().all(|r| r.passed && !r.anchor.is_empty()));

    let o = run(&["verify", "--suite", "corpus", "--max-size", "4", "--jobs", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    assert_eq!(code(&run_on("verify", "square", &["--suite", "bogus"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "epsilon"])), 2);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["decompose", "cube", "--json"],
        vec!["verify", "m3", "--suite", "all", "--json"],
        vec!["rank", "square", "--set-size", "3"],
    ] {
        let a = run_on(args[0], args[1], &args[2..]);
        let b = run_on(args[0], args[1], &args[2..]);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = run(&["verify", "--suite", "corpus", "--max-size", "3", "--json", "--jobs", "1"]);
    let b = run(&["verify", "--suite", "corpus", "--max-size", "3", "--json", "--jobs", "3"]);
    assert_eq!(a.stdout, b.stdout);
}
