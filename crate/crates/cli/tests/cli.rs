use std::process::{Command, Output};

use serde_json::Value;

fn qburau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qburau"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = qburau(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    qburau(args).status.code().unwrap()
}

#[test]
fn qrat_renders_worked_examples() {
    assert_eq!(
        stdout(&["qrat", "2/3"]).trim(),
        "[2/3]_q = (q+q^2)/(1+q+q^2)"
    );
    assert_eq!(stdout(&["qrat", "2"]).trim(), "[2]_q = 1+q");
    assert_eq!(
        stdout(&["qrat", "5/3"]).trim(),
        "[5/3]_q = (1+q+2q^2+q^3)/(1+q+q^2)"
    );
    let v: Value = serde_json::from_str(&stdout(&["--format", "json", "qrat", "5/3"])).unwrap();
    assert_eq!(v["r"], 5);
    assert_eq!(v["den"]["coeffs"], serde_json::json!(["1", "1", "1"]));
}

#[test]
fn qrat_rejects_nonpositive_input() {
    assert_eq!(code(&["qrat", "0/1"]), 2);
    assert_eq!(code(&["qrat", "-3/2"]), 2);
    assert_eq!(code(&["qrat", "x"]), 2);
}

#[test]
fn burau_matrices() {
    assert_eq!(
        stdout(&["burau", "aBaB"]).trim(),
        "t^-2 * [[-t+t^2-2t^3+t^4, 1-t+t^2], [-t+t^2-t^3, 1-t]]"
    );
    assert_eq!(stdout(&["burau", "ababab"]).trim(), "t^3 * Id");
    assert_eq!(stdout(&["burau", ""]).trim(), "Id");
    assert_eq!(stdout(&["burau", "1,-2,1,-2"]), stdout(&["burau", "aBaB"]));
    let q = stdout(&["burau", "a", "--q-convention"]);
    assert_eq!(q.trim(), "[[q, 1], [0, 1]]");
    assert_eq!(code(&["burau", "axb"]), 2);
}

#[test]
fn jones_and_alexander() {
    assert_eq!(stdout(&["jones", "3/1"]).trim(), "1+q^2+q^3");
    assert_eq!(stdout(&["alexander", "abab"]).trim(), "1-t+t^2");
    assert_eq!(stdout(&["alexander", "ababab"]).trim(), "1-t-t^3+t^4");
}

#[test]
fn specialize_verdicts() {
    let out = stdout(&["specialize", "--t0", "-1"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("UNFAITHFUL (center in kernel)"));
    let v: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(v["verdict"], "UnfaithfulCenter");
    let v: Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "specialize",
        "--t0",
        "zeta(5,1)",
    ]))
    .unwrap();
    assert_eq!(v["witness"], serde_json::json!({"r": 1, "s": 10}));
    let v: Value =
        serde_json::from_str(&stdout(&["--format", "json", "specialize", "--t0", "1"])).unwrap();
    assert_eq!(v["verdict"], "UnfaithfulPoleWitness");
    assert_eq!(v["witness"], serde_json::json!({"r": 1, "s": 2}));
    assert!((v["root"][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
    let v: Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "specialize",
        "--t0",
        "0.5+0.2i",
    ]))
    .unwrap();
    assert_eq!(v["verdict"], "NoWitnessUpTo");
    assert_eq!(code(&["specialize", "--t0", "0"]), 2);
    assert_eq!(code(&["specialize", "--t0", "nonsense"]), 2);
}

#[test]
fn sigma_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("roots.csv");
    let summary = stdout(&["sigma", "--max-den", "10", "--out", path.to_str().unwrap()]);
    assert!(
        summary.contains("violations of (0.171572875254, 5.828427124746): 0"),
        "{summary}"
    );
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("r,s,part,root_re,root_im,modulus,residual")
    );
    let rows: Vec<&str> = lines.collect();
    assert!(
        rows.iter().any(|l| l.starts_with("1,2,den,-1.0,0.0,")),
        "{csv}"
    );
    let roots = summary
        .lines()
        .next()
        .unwrap()
        .trim_start_matches("roots: ")
        .parse::<usize>()
        .unwrap();
    assert_eq!(rows.len(), roots);
}

#[test]
fn sigma_json_round_trips() {
    let v: Value =
        serde_json::from_str(&stdout(&["--format", "json", "sigma", "--max-den", "4"])).unwrap();
    let records = v["sample"]["records"].as_array().unwrap();
    assert_eq!(
        records.len(),
        v["summary"]["total_roots"].as_u64().unwrap() as usize
    );
    assert_eq!(v["summary"]["proven_violations"], 0);
}

#[test]
fn sigma_error_paths() {
    assert_eq!(code(&["sigma", "--max-den", "1"]), 2);
    assert_eq!(
        code(&["sigma", "--max-den", "5", "--out", "/nonexistent-dir/x.csv"]),
        3
    );
    // An impossible residual bound turns into a convergence failure.
    assert_eq!(
        code(&["sigma", "--max-den", "5", "--residual-tol", "1e-300"]),
        4
    );
    assert_eq!(code(&["sigma", "--max-den", "5", "--annulus-tol=-1"]), 2);
}

#[test]
fn stabilize_output() {
    let out = stdout(&["stabilize", "phi"]);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("1 + q^2 - q^3 + 2*q^4"));
    assert_eq!(lines.next(), Some("stable at m = 13"));
    let v: Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "stabilize",
        "phi",
        "--order",
        "4",
    ]))
    .unwrap();
    assert_eq!(v["order"], 4);
    assert_eq!(v["coeffs"], serde_json::json!(["1", "0", "1", "-1"]));
    assert!(v["stable_at_m"].as_u64().unwrap() <= 25);
    assert_eq!(code(&["stabilize", "phi", "--order", "500"]), 4);
    assert_eq!(code(&["stabilize", "1;0"]), 2);
}

#[test]
fn rlroots_output() {
    let csv = stdout(&["--format", "csv", "rlroots", "--m", "3"]);
    assert!(csv.starts_with("m,entry,root_re,root_im,modulus,distance\n"));
    let v: Value =
        serde_json::from_str(&stdout(&["--format", "json", "rlroots", "--m", "5"])).unwrap();
    assert!(v["min_distance"].as_f64().unwrap() > 0.0);
    assert_eq!(code(&["rlroots", "--m", "0"]), 2);
}

#[test]
fn output_is_deterministic() {
    let args = ["--format", "csv", "sigma", "--max-den", "8"];
    assert_eq!(stdout(&args), stdout(&args));
    let seq = stdout(&[
        "--threads",
        "1",
        "--format",
        "csv",
        "sigma",
        "--max-den",
        "8",
    ]);
    assert_eq!(seq, stdout(&args));
    let four = stdout(&[
        "--threads",
        "4",
        "--format",
        "csv",
        "sigma",
        "--max-den",
        "8",
    ]);
    assert_eq!(four, seq);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&["nosuch"]), 2);
    assert_eq!(code(&["qrat"]), 2);
    assert_eq!(code(&["--format", "csv", "qrat", "2"]), 2);
    assert_eq!(code(&["--threads", "0", "qrat", "2"]), 2);
    assert_eq!(code(&["selftest", "--only", "99"]), 2);
}

#[test]
fn selftest_single_criterion() {
    let out = stdout(&["selftest", "--only", "1"]);
    assert!(out.starts_with("PASS criterion  1"), "{out}");
    let v: Value =
        serde_json::from_str(&stdout(&["--format", "json", "selftest", "--only", "10"])).unwrap();
    assert_eq!(v[0]["passed"], true);
}
