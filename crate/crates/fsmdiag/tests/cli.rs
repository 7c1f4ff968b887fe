use std::io::Write;
use std::process::{Command, Output, Stdio};

use fsmdiag::format;
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn fsmdiag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsmdiag")).args(args).env_remove("FSMDIAG_BUDGET").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_eventual_holds() {
    let o = fsmdiag(&["check", &fixture("m1.fsm"), "--property", "eventual"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("params: tau=1 delta=1 gamma1=0 gamma2=0"), "{}", stdout(&o));
}

#[test]
fn check_diag_fails_with_witness() {
    let o = fsmdiag(&["check", &fixture("m1.fsm"), "--property", "diag"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness: (3,5)"));
}

#[test]
fn check_json_report() {
    let o = fsmdiag(&["check", &fixture("m1.fsm"), "--property", "eventual", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["tool"], "fsmdiag");
    assert_eq!(v["holds"], true);
    assert_eq!(v["params"]["tau"], 1);
    assert_eq!(v["params"]["gamma1"], 0);
    assert_eq!(v["tuple"]["b"], 2);
    assert_eq!(v["frontier"].as_array().unwrap().len(), 4);
    assert!(v["witness"].is_null());
    assert!(v["elapsed_ms"].is_number());
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(fsmdiag(&["check", "missing.fsm", "--property", "diag"]).status.code(), Some(2));
    assert_eq!(fsmdiag(&["check", &fixture("m1.fsm"), "--property", "sometimes"]).status.code(), Some(2));
    assert_eq!(fsmdiag(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fsm");
    std::fs::write(&bad, "state a output=x init\n").unwrap();
    let o = fsmdiag(&["check", bad.to_str().unwrap(), "--property", "diag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("header"));
    // Silent states are rejected by analysis commands.
    assert_eq!(fsmdiag(&["check", &fixture("silent.fsm"), "--property", "diag"]).status.code(), Some(2));
    assert_eq!(fsmdiag(&["check", &fixture("m1.fsm"), "--property", "diag", "--critical", "9"]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let o = fsmdiag(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("observe"));
}

#[test]
fn validate_reports_violations() {
    assert_eq!(fsmdiag(&["validate", &fixture("m1.fsm")]).status.code(), Some(0));
    let o = fsmdiag(&["validate", &fixture("silent.fsm")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("violation: state 3 is silent"));
    let o = fsmdiag(&["validate", &fixture("silent.fsm"), "--mode", "desilent", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["ok"], false);
    assert_eq!(v["violations"].as_array().unwrap().len(), 1);
}

#[test]
fn overrides_replace_initial_and_critical_sets() {
    let m2 = fixture("m2.fsm");
    assert_eq!(fsmdiag(&["check", &m2, "--property", "critical"]).status.code(), Some(1));
    assert_eq!(fsmdiag(&["check", &m2, "--property", "critical", "--initial", "1"]).status.code(), Some(0));
    let o = fsmdiag(&["check", &m2, "--property", "diag", "--critical", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("tau=0 delta=0"));
}

#[test]
fn sets_text_and_json() {
    let o = fsmdiag(&["sets", &fixture("m1.fsm"), "--set", "F", "--steps"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("F* (step 2): (1,1) (2,2) (3,3) (3,5)"), "{text}");
    assert!(text.contains("  F_1: "));
    let v = json(&fsmdiag(&["sets", &fixture("m1.fsm"), "--json"]));
    let sets = v["sets"].as_array().unwrap();
    assert_eq!(sets.len(), 8);
    let lambda = sets.iter().find(|s| s["name"] == "Lambda*").unwrap();
    assert_eq!(lambda["convergence_step"], 2);
    assert_eq!(lambda["pairs"], serde_json::json!([["3", "5"], ["5", "3"]]));
    assert!(lambda.get("steps").is_none());
}

#[test]
fn observe_trace_prints_events() {
    let o = fsmdiag(&["observe", &fixture("m1.fsm"), "--property", "eventual", "--trace", "c b a b"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("EVENT step=4 window=[3,3] exact=true\n"), "{text}");
    assert!(text.contains("ESTIMATE step=3 states={3}"));
}

#[test]
fn observe_reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_fsmdiag"))
        .args(["observe", &fixture("m1.fsm"), "--property", "eventual", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"c\nb\n\na\nb\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["steps"], 4);
    assert_eq!(v["lag"], 1);
    assert_eq!(v["events"], serde_json::json!([{ "step": 4, "window": [3, 3], "exact": true }]));
    assert_eq!(v["estimate"], serde_json::json!(["3"]));
}

#[test]
fn observe_errors() {
    let m1 = fixture("m1.fsm");
    // Unknown symbol, a stream the machine cannot produce, a failing property.
    let o = fsmdiag(&["observe", &m1, "--property", "eventual", "--trace", "c z"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fsmdiag(&["observe", &m1, "--property", "eventual", "--trace", "c c", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Vec<Value> = serde_json::Deserializer::from_slice(&o.stdout).into_iter().map(|v| v.unwrap()).collect();
    assert!(v[0]["error"].as_str().unwrap().contains("step 2"));
    assert_eq!(fsmdiag(&["observe", &m1, "--property", "diag", "--trace", "c"]).status.code(), Some(2));
    assert_eq!(fsmdiag(&["observe", &m1, "--property", "exact-step", "--trace", "c"]).status.code(), Some(2));
}

#[test]
fn desilent_writes_machine_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("hat.fsm");
    let prov = dir.path().join("prov.json");
    let o = fsmdiag(&[
        "desilent",
        &fixture("silent.fsm"),
        "-o",
        out.to_str().unwrap(),
        "--provenance",
        prov.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("warning: initial state 4 has a predecessor"));
    let hat = format::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let src = format::parse(&std::fs::read_to_string(fixture("silent.fsm")).unwrap()).unwrap();
    assert_eq!(hat, fsmdiag_core::desilent(&src).unwrap().m_hat);
    let p: Value = serde_json::from_str(&std::fs::read_to_string(&prov).unwrap()).unwrap();
    let p = p.as_array().unwrap();
    assert_eq!(p.len(), hat.num_states());
    let collapsed = p.iter().find(|e| e["state"] == "3_1.1").unwrap();
    assert_eq!(collapsed["kind"], "collapsed");
    assert_eq!(collapsed["last"], "3");
    assert_eq!(collapsed["entry"], "1");
    assert_eq!(collapsed["crossed"], true);
    // Without -o the machine goes to standard output.
    let o = fsmdiag(&["desilent", &fixture("silent.fsm")]);
    assert_eq!(format::parse(&stdout(&o)).unwrap(), hat);
    assert_eq!(fsmdiag(&["check", out.to_str().unwrap(), "--property", "eventual"]).status.code(), Some(0));
}

#[test]
fn oracle_commands() {
    let m1 = fixture("m1.fsm");
    let o = fsmdiag(&["oracle", &m1, "--property", "eventual", "--horizon", "12", "--params", "1,1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: consistent-up-to-horizon"));
    let o = fsmdiag(&["oracle", &m1, "--property", "eventual", "--horizon", "12", "--params", "0,1,0,0", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["result"], "violated");
    assert_eq!(v["counterexample"]["crossing_step"], 1);
    let o = fsmdiag(&["oracle", &m1, "--property", "eventual", "--horizon", "12", "--json"]);
    let v = json(&o);
    assert_eq!(v["searched"], true);
    assert_eq!(v["params"]["tau"], 1);
    assert_eq!(v["params"]["delta"], 1);
    // diag has no transient.
    let o = fsmdiag(&["oracle", &m1, "--property", "diag", "--horizon", "12", "--params", "1,1,0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fsmdiag(&["oracle", &m1, "--property", "diag", "--horizon", "12", "--params", "1,1"]).status.code(), Some(2));
}

#[test]
fn budget_variable_caps_the_oracle() {
    let run = |budget: &str| {
        Command::new(env!("CARGO_BIN_EXE_fsmdiag"))
            .args(["oracle", &fixture("m1.fsm"), "--property", "eventual", "--horizon", "30", "--params", "1,1,0,0"])
            .env("FSMDIAG_BUDGET", budget)
            .output()
            .unwrap()
    };
    assert_eq!(run("5").status.code(), Some(3));
    assert_eq!(run("lots").status.code(), Some(2));
    assert_eq!(run("5000000").status.code(), Some(0));
}
