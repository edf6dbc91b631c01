mod common;

use std::process::Command;

use common::{fixture, run_cli};
use cusp_certify::bounds::{bound_report, BoundInputs, BoundReport};
use cusp_certify::cli::{results_digest, Certificate, EXIT_CAP, EXIT_MEMBERSHIP, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

const DILATION: &str = r#"[[[2,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[0.5,0]]]"#;
const NON_MEMBER: &str = r#"[[[2,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[2,0]]]"#;

fn write_tmp(dir: &tempfile::TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

fn strip_timestamp(json: &str) -> Value {
    let mut v: Value = serde_json::from_str(json).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

#[test]
fn classify_reports_translation_length() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_tmp(&dir, "d.json", DILATION);
    let (code, out, _) = run_cli(&["classify", &m]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("hyperbolic r=2.000000"), "{out}");
    assert!(out.contains("length≈2.032696"), "{out}");

    let (code, out, _) = run_cli(&["classify", &m, "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let cert: Certificate = serde_json::from_str(&out).unwrap();
    assert_eq!(cert.command, "classify");
    let length = cert.results["translationLength"].as_f64().unwrap();
    assert!((length - 2.0326961933568076).abs() < 1e-12);
}

#[test]
fn classify_rejects_non_members() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_tmp(&dir, "bad.json", NON_MEMBER);
    let (code, _, err) = run_cli(&["classify", &m]);
    assert_eq!(code, EXIT_MEMBERSHIP);
    assert!(err.contains("error"), "{err}");
}

#[test]
fn usage_errors_exit_with_one() {
    let lattice = fixture("synthetic-2.json");
    let lattice = lattice.to_str().unwrap();
    assert_eq!(run_cli(&["ball", lattice, "-L", "0"]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["ball", lattice, "-L", "13"]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["bounds", "--n", "2", "--sys", "-1"]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["verify", "--suite", "nonsense"]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["classify", "/nonexistent/matrix.json"]).0, EXIT_USAGE);
    assert_eq!(run_cli(&["frobnicate"]).0, EXIT_USAGE);
}

#[test]
fn ball_is_independent_of_thread_count() {
    let lattice = fixture("synthetic-2.json");
    let lattice = lattice.to_str().unwrap();
    let runs: Vec<Value> = ["1", "8"]
        .iter()
        .map(|k| {
            let (code, out, _) = run_cli(&["--threads", k, "ball", lattice, "-L", "4"]);
            assert_eq!(code, EXIT_OK);
            strip_timestamp(&out)
        })
        .collect();
    assert_eq!(runs[0].to_string(), runs[1].to_string());
}

#[test]
fn ball_cap_writes_resumable_partial() {
    let dir = tempfile::tempdir().unwrap();
    let lattice = fixture("synthetic-2.json");
    let lattice = lattice.to_str().unwrap();
    let partial = dir.path().join("partial.json");
    let partial = partial.to_str().unwrap();
    let (code, _, err) = run_cli(&["ball", lattice, "-L", "4", "--cap", "100", "--partial-out", partial]);
    assert_eq!(code, EXIT_CAP);
    assert!(err.contains("--resume"), "{err}");

    let (code, resumed, _) = run_cli(&["ball", lattice, "-L", "4", "--resume", partial]);
    assert_eq!(code, EXIT_OK);
    let (_, direct, _) = run_cli(&["ball", lattice, "-L", "4"]);
    assert_eq!(strip_timestamp(&resumed)["results"], strip_timestamp(&direct)["results"]);
}

#[test]
fn bounds_json_round_trips_to_report() {
    let (code, out, _) = run_cli(&["bounds", "--n", "2", "--sys", "2000", "--m", "2", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let cert: Certificate = serde_json::from_str(&out).unwrap();
    let parsed: BoundReport = serde_json::from_value(cert.results.clone()).unwrap();
    let inputs = BoundInputs {
        m: 2,
        ..BoundInputs::new(2, 2000.0)
    };
    assert_eq!(parsed, bound_report(&inputs).unwrap());
    assert_eq!(cert.results_digest, results_digest(&cert.results));
}

#[test]
fn results_digest_is_reproducible() {
    let args = ["bounds", "--n", "3", "--sys", "100", "--format", "json"];
    let a: Certificate = serde_json::from_str(&run_cli(&args).1).unwrap();
    let b: Certificate = serde_json::from_str(&run_cli(&args).1).unwrap();
    assert_eq!(a.results_digest, b.results_digest);
    assert_eq!(a.inputs_digest, b.inputs_digest);
    assert_eq!(a.results_digest.len(), 64);
}

#[test]
fn bounds_text_lists_assumptions() {
    let (code, out, _) = run_cli(&["bounds", "--n", "2", "--sys", "258"]);
    assert_eq!(code, EXIT_OK);
    assert!(!out.contains("NaN"));
    assert!(out.contains("[hypotheses]"), "{out}");
}

#[test]
fn verify_trace_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run_cli(&["verify", "--suite", "trace", "--repro-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cusp-certify");
    let dir = tempfile::tempdir().unwrap();
    let good = write_tmp(&dir, "d.json", DILATION);
    let bad = write_tmp(&dir, "bad.json", NON_MEMBER);
    let status = |args: &[&str]| Command::new(bin).args(args).env_remove("CUSP_CERTIFY_THREADS").output().unwrap();

    let ok = status(&["classify", &good]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("hyperbolic"));
    assert_eq!(status(&["classify", &bad]).status.code(), Some(EXIT_MEMBERSHIP));
    assert_eq!(status(&["bounds", "--n", "0", "--sys", "1"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(status(&["--help"]).status.code(), Some(EXIT_OK));
}

#[test]
fn threads_from_environment() {
    let bin = env!("CARGO_BIN_EXE_cusp-certify");
    let lattice = fixture("heisenberg-2.json");
    let run = |threads: &str| {
        let out = Command::new(bin)
            .args(["ball", lattice.to_str().unwrap(), "-L", "3"])
            .env("CUSP_CERTIFY_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(EXIT_OK));
        strip_timestamp(&String::from_utf8(out.stdout).unwrap())
    };
    assert_eq!(run("1"), run("4"));
}
