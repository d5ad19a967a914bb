//! End-to-end tests of the `fdiv` binary: exit codes, determinism, file
//! handling and output encodings.

use std::path::Path;
use std::process::{Command, Output};

fn fdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdiv"))
        .args(args)
        .env_remove("FDIV_SEED")
        .output()
        .expect("binary runs")
}

fn fdiv_with_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdiv"))
        .args(args)
        .env_remove("FDIV_SEED")
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const CIRCUIT: &str = r#"{
  "qubits": 1,
  "layers": [[{"pauli_sum": [[0.5, "Z"]]}]],
  "observable": {"pauli_sum": [[1.0, "X"]]},
  "init": "plus_all"
}"#;

const MEASURE_P: &str = r#"{
  "domain": "theta",
  "atoms": [
    {"params": [0.0], "weight": 0.8},
    {"params": [1.5707963267948966], "weight": 0.2}
  ]
}"#;

const MEASURE_Q: &str = r#"{
  "domain": "theta",
  "atoms": [
    {"params": [0.0], "weight": 0.2},
    {"params": [1.5707963267948966], "weight": 0.8}
  ]
}"#;

#[test]
fn tightness_emits_sorted_csv_and_succeeds() {
    let out = fdiv(&[
        "tightness",
        "--r-grid",
        "0.5",
        "--k-grid",
        "2",
        "--n-grid",
        "1",
        "--generators",
        "tv",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("kind,space,generator,k,n,r,lhs,rhs,slack,tight")
    );
    let first = lines.next().expect("one gradient row");
    assert!(first.starts_with("gradient,theta,tv,,1,0.5,"), "{first}");
    assert!(first.ends_with(",true"), "{first}");
    // gradient row + one moment row per space
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["verify", "--trials", "25", "--seed", "7", "--generators", "js,tv"];
    let a = fdiv(&args);
    let b = fdiv(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same seed must give the same bytes");

    let c = fdiv(&["verify", "--trials", "25", "--seed", "8", "--generators", "js,tv"]);
    assert_eq!(c.status.code(), Some(0));
    assert_ne!(a.stdout, c.stdout, "different seeds should explore different instances");
}

#[test]
fn seed_env_var_is_used_and_flag_wins() {
    let from_env = fdiv_with_env(&["verify", "--trials", "10"], "FDIV_SEED", "123");
    let from_flag = fdiv(&["verify", "--trials", "10", "--seed", "123"]);
    assert_eq!(from_env.status.code(), Some(0));
    assert_eq!(from_env.stdout, from_flag.stdout);

    let overridden = fdiv_with_env(
        &["verify", "--trials", "10", "--seed", "124"],
        "FDIV_SEED",
        "123",
    );
    assert_ne!(overridden.stdout, from_env.stdout, "explicit flag overrides the env var");
}

#[test]
fn divergence_reports_the_infinite_marker_on_disjoint_supports() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.json");
    let q = dir.path().join("q.json");
    write(&p, r#"{"domain": "abstract", "atoms": [{"label": "a", "weight": 1.0}]}"#);
    write(&q, r#"{"domain": "abstract", "atoms": [{"label": "b", "weight": 1.0}]}"#);
    let out = fdiv(&[
        "divergence",
        "--measure-p",
        p.to_str().unwrap(),
        "--measure-q",
        q.to_str().unwrap(),
        "--generators",
        "jeffreys",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert_eq!(
        text,
        "generator,symmetric,total_variation,triangular,structural\njeffreys,inf,1,1,1\n"
    );
}

#[test]
fn json_format_produces_parseable_rows() {
    let out = fdiv(&[
        "tightness",
        "--r-grid",
        "0.3",
        "--k-grid",
        "1",
        "--n-grid",
        "1",
        "--generators",
        "triangular",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let obj = row.as_object().unwrap();
        assert_eq!(obj.len(), 10);
        for key in ["kind", "space", "generator", "k", "n", "r", "lhs", "rhs", "slack", "tight"] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(row["tight"], serde_json::Value::Bool(true));
    }
}

#[test]
fn out_flag_writes_the_file_and_keeps_stdout_clean() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = fdiv(&[
        "tightness",
        "--r-grid",
        "0.5",
        "--k-grid",
        "1",
        "--n-grid",
        "1",
        "--generators",
        "tv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("kind,space,generator"));
}

#[test]
fn verify_checks_user_measures_against_a_circuit() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("circuit.json");
    let p = dir.path().join("p.json");
    let q = dir.path().join("q.json");
    write(&circuit, CIRCUIT);
    write(&p, MEASURE_P);
    write(&q, MEASURE_Q);
    let out = fdiv(&[
        "verify",
        "--circuit",
        circuit.to_str().unwrap(),
        "--measure-p",
        p.to_str().unwrap(),
        "--measure-q",
        q.to_str().unwrap(),
        "--k-grid",
        "1,2",
        "--generators",
        "tv",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    // 1 gradient row + 2 moment rows per space.
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().skip(1).all(|l| l.contains(",tv,")));
}

#[test]
fn thresholds_run_on_the_fixture_pair() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("circuit.json");
    let p = dir.path().join("p.json");
    let q = dir.path().join("q.json");
    write(&circuit, CIRCUIT);
    write(&p, MEASURE_P);
    write(&q, MEASURE_Q);
    let out = fdiv(&[
        "thresholds",
        "--circuit",
        circuit.to_str().unwrap(),
        "--measure-p",
        p.to_str().unwrap(),
        "--measure-q",
        q.to_str().unwrap(),
        "--k-grid",
        "2",
        "--g-th",
        "0.1",
        "--e-bp",
        "0.0",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert_eq!(text.lines().next(), Some("kind,threshold,actual_divergence,verdict"));
    // The fixture pair swaps 0.8/0.2, so its divergence is exactly 0.6 and
    // the gradient threshold (0.1 - 0) / (0.5 * 1) = 0.2 is met.
    assert!(text.contains("bp-necessary,0.2,0.6000000000000001,true"), "{text}");
}

#[test]
fn oracle_and_asymptotic_succeed_with_small_workloads() {
    let out = fdiv(&[
        "oracle",
        "--generators",
        "js",
        "--t-grid",
        "0.4",
        "--trials",
        "50",
        "--support",
        "3",
        "--seed",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out).starts_with(
        "generator,target_tv,trials,support_size,min_found,profile_value,binary_value"
    ));

    let out = fdiv(&["asymptotic", "--trials", "5", "--dalpha-grid", "1e-3"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(stdout_of(&out)
        .starts_with("generator,delta_alpha,structural,sqrt_triangular,ratio"));
}

#[test]
fn input_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    write(&good, r#"{"domain": "abstract", "atoms": [{"label": "a", "weight": 1.0}]}"#);
    let bad = dir.path().join("bad.json");
    write(&bad, r#"{"domain": "theta", "atoms": [{"weight": 1.0}]}"#);

    let missing = fdiv(&[
        "divergence",
        "--measure-p",
        "/no/such/file.json",
        "--measure-q",
        good.to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr_of(&missing).contains("/no/such/file.json"));

    let malformed = fdiv(&[
        "divergence",
        "--measure-p",
        bad.to_str().unwrap(),
        "--measure-q",
        good.to_str().unwrap(),
    ]);
    assert_eq!(malformed.status.code(), Some(2));
    assert!(stderr_of(&malformed).contains("atom 0"));

    let unknown_generator = fdiv(&["tightness", "--generators", "nope"]);
    assert_eq!(unknown_generator.status.code(), Some(2));

    let bad_bias = fdiv(&["tightness", "--r-grid", "1.5"]);
    assert_eq!(bad_bias.status.code(), Some(2));

    let lonely_measure = fdiv(&["verify", "--measure-p", good.to_str().unwrap()]);
    assert_eq!(lonely_measure.status.code(), Some(2));

    let bad_space = fdiv(&["verify", "--space", "everywhere"]);
    assert_eq!(bad_space.status.code(), Some(2));

    let unknown_subcommand = fdiv(&["frobnicate"]);
    assert_eq!(unknown_subcommand.status.code(), Some(2));

    let help = fdiv(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
}

#[test]
fn coarse_merge_tolerance_is_reported_as_a_property_violation() {
    // With an aggressive merge tolerance, the same parameter atom can land
    // in different merged classes for P and Q, so the pushed-forward pair
    // looks farther apart than the parameter pair.  The binary detects the
    // broken post-processing invariant and signals it with exit code 3.
    let dir = tempfile::tempdir().unwrap();
    let circuit = dir.path().join("circuit.json");
    let p = dir.path().join("p.json");
    let q = dir.path().join("q.json");
    write(&circuit, CIRCUIT);
    write(
        &p,
        r#"{"domain": "theta", "atoms": [
            {"params": [0.0], "weight": 0.5},
            {"params": [1.0], "weight": 0.5}
        ]}"#,
    );
    write(
        &q,
        r#"{"domain": "theta", "atoms": [
            {"params": [0.5], "weight": 0.5},
            {"params": [1.0], "weight": 0.5}
        ]}"#,
    );
    let out = fdiv(&[
        "verify",
        "--circuit",
        circuit.to_str().unwrap(),
        "--measure-p",
        p.to_str().unwrap(),
        "--measure-q",
        q.to_str().unwrap(),
        "--k-grid",
        "1",
        "--generators",
        "tv",
        "--tol",
        "0.3",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("loosened"), "{}", stderr_of(&out));

    // The same inputs with the default tolerance are fine.
    let out = fdiv(&[
        "verify",
        "--circuit",
        circuit.to_str().unwrap(),
        "--measure-p",
        p.to_str().unwrap(),
        "--measure-q",
        q.to_str().unwrap(),
        "--k-grid",
        "1",
        "--generators",
        "tv",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
}
