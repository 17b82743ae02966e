use std::io::Write;
use std::process::{Command, Output, Stdio};

fn pls(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pls"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_theorem_reports_feasible() {
    let o = pls(
        &[
            "check",
            "theorem",
            "--rows",
            "2,1",
            "--cols",
            "2,1",
            "--symbols",
            "2",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("feasible"));
}

#[test]
fn check_infeasible_names_the_violated_condition() {
    let o = pls(
        &[
            "check", "sizes", "--r", "2", "--c", "2", "--s", "2", "--v", "5",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("infeasible"));
    assert!(
        out.contains("[violated]") && out.contains("v ≤ rc"),
        "{out}"
    );
}

#[test]
fn build_sizes_too_many_cells() {
    let o = pls(
        &[
            "build", "sizes", "--r", "2", "--c", "2", "--s", "2", "--v", "5",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).contains("v ≤ rc"));
}

#[test]
fn verify_single_triple() {
    let o = pls(&["verify", "-"], r#"{"version":"1","triples":[[1,1,1]]}"#);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["valid", "v = 1", "r = 1", "c = 1", "s = 1"] {
        assert!(out.lines().any(|l| l == line), "missing {line:?} in {out}");
    }
}

#[test]
fn verify_json_profile() {
    let o = pls(
        &["verify", "-", "--json"],
        r#"{"version":"1","triples":[[1,1,1],[1,2,2],[2,1,2]]}"#,
    );
    assert_eq!(o.status.code(), Some(0));
    let profile: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(profile["volume"], 3);
    assert_eq!(profile["sym_params"], serde_json::json!([1, 2]));
}

#[test]
fn build_then_verify() {
    let built = pls(
        &[
            "build",
            "row-params",
            "--rows",
            "2,2,2",
            "--c",
            "3",
            "--s",
            "2",
        ],
        "",
    );
    assert_eq!(built.status.code(), Some(0));
    let o = pls(&["verify", "-"], &stdout(&built));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("row-params = 2,2,2\n") && out.contains("s = 2\n"),
        "{out}"
    );
}

#[test]
fn oracle_budget_is_exit_three() {
    let o = pls(
        &[
            "oracle", "exists", "--r", "7", "--c", "7", "--s", "7", "--v", "7",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(!stderr(&o).is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(pls(&["build"], "").status.code(), Some(2));
    assert_eq!(pls(&["verify", "/no/such/file"], "").status.code(), Some(2));
    assert_eq!(pls(&["check", "spec", "-"], "{").status.code(), Some(2));
}

#[test]
fn sweep_reports_no_mismatches() {
    let o = pls(
        &["sweep", "row-params", "--max-dim", "2", "--max-entry", "2"],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(", 0 mismatches"));
}
