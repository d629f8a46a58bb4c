//! End-to-end tests of the binary: exit codes, output determinism, and
//! the table schemas.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matramp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

/// Per-test scratch file; the pid keeps parallel workspaces apart.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("matramp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(name)
}

fn write_scratch(name: &str, text: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, text).expect("scratch write");
    path
}

const SCENARIO: &str = r#"{
  "name": "demo",
  "n": 1,
  "a": {"family": "product", "upper": "0", "lower": "0"},
  "b": {"family": "bell", "labels": ["phi+"]},
  "epsilon": 0.3,
  "delta": 0.1,
  "seeds": [7, 8],
  "methods": ["indirect-sql", "indirect-hl", "direct-sql", "direct-hl"]
}"#;

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for sub in [
        "encode-a",
        "encode-b",
        "estimate",
        "bench-extreme",
        "regime-sweep",
        "two-design",
        "gibbs-demo",
        "verify",
    ] {
        assert!(text.contains(sub), "help misses {sub}");
    }
}

#[test]
fn estimate_is_deterministic_down_to_the_byte() {
    let cfg = write_scratch("det.json", SCENARIO);
    let cfg = cfg.to_str().unwrap();
    let first = run(&["estimate", "--config", cfg]);
    assert!(first.status.success(), "{}", stderr(&first));
    let second = run(&["estimate", "--config", cfg]);
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scenario,method,n,mu_exact,estimate,epsilon,delta,shots,queries,seed"
    );
    // 4 methods x 2 seeds.
    assert_eq!(text.lines().count(), 9);
    // --out carries the same bytes as stdout.
    let out_path = scratch("det.csv");
    let third = run(&["estimate", "--config", cfg, "--out", out_path.to_str().unwrap()]);
    assert!(third.status.success());
    assert_eq!(std::fs::read(&out_path).unwrap(), first.stdout);
}

#[test]
fn estimate_json_carries_query_accounting() {
    let cfg = write_scratch("json.json", SCENARIO);
    let out = run(&[
        "estimate",
        "--config",
        cfg.to_str().unwrap(),
        "--method",
        "indirect-hl",
        "--seed",
        "5",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["method"], "indirect-hl");
    assert_eq!(rows[0]["seed"], 5);
    assert!(rows[0]["queries_used"].as_u64().unwrap() > 0);
    // mu = <B|A> = 1/sqrt(2) for |00> against phi+.
    let mu = rows[0]["mu_exact"].as_f64().unwrap();
    assert!((mu - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn malformed_json_exits_one() {
    let cfg = write_scratch("bad.json", "{not json");
    let out = run(&["estimate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("error:"));
}

#[test]
fn unknown_flags_and_methods_exit_one() {
    let cfg = write_scratch("method.json", SCENARIO);
    let out = run(&[
        "estimate",
        "--config",
        cfg.to_str().unwrap(),
        "--method",
        "sideways",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["estimate", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["encode-a"]);
    assert_eq!(out.status.code(), Some(1), "missing --config is a validation error");
}

#[test]
fn encode_reports_declared_weights() {
    let cfg = write_scratch("b.json", r#"{"family":"bell","labels":["phi+","psi-"]}"#);
    let out = run(&["encode-b", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 2);
    assert!((v["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["protocol"]["shots"], 0);

    let cfg = write_scratch("a.json", r#"{"family":"product","upper":"01","lower":"10"}"#);
    let out = run(&[
        "encode-a",
        "--config",
        cfg.to_str().unwrap(),
        "--shots",
        "4000",
        "--seed",
        "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["gamma"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["protocol"]["shots"], 4000);
    let est = v["protocol"]["estimate"].as_f64().unwrap();
    let err = v["protocol"]["stderr"].as_f64().unwrap();
    assert!((est - 0.5).abs() < 5.0 * err.max(1e-3));
}

#[test]
fn decomposition_specs_build_the_lcu_route() {
    let cfg = write_scratch(
        "lcu.json",
        r#"{"family":"decomposition","terms":[
            {"coeff":[0.8,0.0],"pauli":"XI"},
            {"coeff":[0.0,0.6],"pauli":"ZY"}]}"#,
    );
    let out = run(&["encode-b", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // lambda = 2^{n/2} / |c|_1 with the unit-2-norm coefficients.
    assert!((v["lambda"].as_f64().unwrap() - 2.0 / 1.4).abs() < 1e-12);
    assert_eq!(v["k"], 1);
}

#[test]
fn regime_sweep_emits_the_default_grid() {
    let out = run(&["regime-sweep"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,kind,parameter,subdivisions,eta,b_one_norm,gamma_lambda,sampling_gain,estimation_gain"
    );
    // 6 cuts x 3 norms + 4 trotter points x 3 norms.
    assert_eq!(text.lines().count(), 31);
    assert!(text.contains("circuit"));
    assert!(text.contains("trotter"));
}

#[test]
fn two_design_report_matches_the_closed_form() {
    let out = run(&["two-design", "--n", "1", "--samples", "0"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["exact_distance"].as_f64().unwrap() - 0.15).abs() < 1e-12);
    assert!(v["mc_consistent"].is_null());
    // Reports have no CSV form.
    let out = run(&["two-design", "--n", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gibbs_demo_reads_a_hamiltonian_file() {
    let cfg = write_scratch(
        "h.json",
        r#"{"t":0.0,"terms":[{"coeff":1.0,"pauli":"ZZ"},{"coeff":0.3,"pauli":"XI"}]}"#,
    );
    let out = run(&[
        "gibbs-demo",
        "--config",
        cfg.to_str().unwrap(),
        "--beta",
        "0.7",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 2);
    assert!(v["gamma_residual"].as_f64().unwrap() < 1e-10);
    assert!(v["purification_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn bench_extreme_reports_both_targets() {
    let out = run(&[
        "bench-extreme",
        "--n",
        "1",
        "--seeds",
        "6",
        "--epsilon",
        "0.3",
        "--delta",
        "0.1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let targets = v["targets"].as_array().unwrap();
    let names: Vec<&str> = targets.iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["extreme-root", "extreme-full"]);
    for t in targets {
        assert!(t["sql_ratio"].as_f64().unwrap() > 0.0);
        assert_eq!(t["rows"].as_array().unwrap().len(), 24);
    }
    // The CSV view flattens the same rows.
    let out = run(&[
        "bench-extreme",
        "--n",
        "1",
        "--seeds",
        "6",
        "--epsilon",
        "0.3",
        "--delta",
        "0.1",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 49);
}

#[test]
fn verify_passes_on_a_fresh_build() {
    let out = run(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 27);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn verify_exits_two_when_checks_fail() {
    // A four-qubit budget starves most checks without crashing them.
    let out = bin()
        .args(["verify"])
        .env("MATRAMP_MAX_QUBITS", "4")
        .output()
        .expect("binary spawns");
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).lines().any(|l| l.starts_with("FAIL ")));
}
