use std::path::PathBuf;
use std::process::{Command, Output};

use densefew_cli::envelope::ReportEnvelope;
use densefew_cli::files::{GaleFile, SystemFile};
use densefew_core::{CountReport, GaleSystem};

fn densefew(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_densefew"))
        .args(args)
        .env_remove("DENSEFEW_SEED")
        .output()
        .expect("binary runs")
}

fn fixture() -> String {
    concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/worked_example.json").to_string()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("densefew-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn envelope(out: &Output) -> ReportEnvelope {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

/// `x y = 1`, `x = y`: real solutions `(1, 1)` and `(-1, -1)`.
const SMALL: &str = r#"{
  "variables": ["x", "y"],
  "polynomials": [
    {"terms": [{"coeff": "1", "exponents": [1, 1]}, {"coeff": "-1", "exponents": [0, 0]}]},
    {"terms": [{"coeff": "1", "exponents": [1, 0]}, {"coeff": "-1", "exponents": [0, 1]}]}
  ]
}"#;

#[test]
fn bounds_exit_codes() {
    let ok = densefew(&[
        "bounds",
        "--n",
        "2",
        "--ell",
        "2",
        "--d",
        "2",
        "--formula",
        "dense-positive",
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("max count 83"));
    for args in [
        &["bounds", "--n", "0", "--ell", "2", "--d", "2"][..],
        &["bounds", "--formula", "nope", "--n", "2"],
        &["bounds", "--formula", "dense-real", "--n", "2"],
        &["bounds"],
    ] {
        assert_eq!(densefew(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bounds_table_lists_every_evaluable_formula() {
    let out = densefew(&[
        "--json", "bounds", "--n", "2", "--ell", "2", "--d", "2", "--k", "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let env = envelope(&out);
    let rows = env.result.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(env.command, "bounds");
    assert!(env.seed.is_none());
}

#[test]
fn malformed_input_is_exit_2() {
    let bad_json = scratch("bad.json", "{ not json");
    let float = scratch(
        "float.json",
        r#"{"variables": ["x", "y"], "polynomials": [{"terms": [{"coeff": 0.5, "exponents": [0, 0]}]}]}"#,
    );
    let unknown = scratch(
        "unknown.json",
        r#"{"variables": ["x"], "polynomials": [], "extra": 1}"#,
    );
    for path in [&bad_json, &float, &unknown] {
        let out = densefew(&["count", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{}", path.display());
    }
    assert_eq!(
        densefew(&["count", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    assert_eq!(
        densefew(&["count", &fixture(), "--region", "delta"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn analyze_budget_and_not_found() {
    let triangle = scratch(
        "triangle.json",
        r#"{"nvars": 2, "points": [[0,0],[7,1],[2,3],[14,2],[9,4],[4,6],[9,0],[2,7]]}"#,
    );
    let path = triangle.to_str().unwrap();
    let out = densefew(&["--json", "analyze", path, "--d", "2", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let env = envelope(&out);
    assert_eq!(env.result["found"], true);
    assert_eq!(
        env.result["affine_span_index"],
        serde_json::json!({"finite": "1"})
    );

    assert_eq!(
        densefew(&["analyze", path, "--d", "2", "--ell", "2", "--budget", "1"])
            .status
            .code(),
        Some(3)
    );
    // Not collinear, so no 8-point segment.
    let out = densefew(&["analyze", path, "--d", "7", "--ell", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("NOT_FOUND"));
}

#[test]
fn dualize_without_decomposition_is_exit_4() {
    let out = densefew(&["dualize", &fixture(), "--d", "1", "--ell", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn small_system_counts() {
    let path = scratch("small.json", SMALL);
    let out = densefew(&[
        "--json",
        "--seed",
        "3",
        "count",
        path.to_str().unwrap(),
        "--region",
        "positive",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let env = envelope(&out);
    assert_eq!(env.seed, Some(3));
    assert_eq!(env.result["count"], 1);
    let report: CountReport = serde_json::from_value(env.result["report"].clone()).unwrap();
    assert_eq!(report.total_real, 2);
    assert_eq!(report.region("positive"), 1);
}

#[test]
fn seed_from_environment() {
    let path = scratch("small-env.json", SMALL);
    let out = Command::new(env!("CARGO_BIN_EXE_densefew"))
        .args(["--json", "count", path.to_str().unwrap()])
        .env("DENSEFEW_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(envelope(&out).seed, Some(11));
}

#[test]
fn reports_are_deterministic() {
    let path = scratch("small-det.json", SMALL);
    let p = path.to_str().unwrap();
    let a = densefew(&["--json", "--seed", "5", "count", p]);
    let b = densefew(&["--json", "--seed", "5", "count", p]);
    assert_eq!(a.stdout, b.stdout);
    // Another shear gives the same counts; the seed is not part of the digest.
    let c = envelope(&densefew(&["--json", "--seed", "6", "count", p]));
    let a = envelope(&a);
    assert_eq!(a.result["count"], c.result["count"]);
    assert_eq!(
        a.result["report"]["total_real"],
        c.result["report"]["total_real"]
    );
    assert_eq!(a.inputs_digest, c.inputs_digest);
}

#[test]
fn json_round_trips() {
    let text = std::fs::read_to_string(fixture()).unwrap();
    let file: SystemFile = serde_json::from_str(&text).unwrap();
    let again: SystemFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
    assert_eq!(again, file);

    let out_path = std::env::temp_dir().join(format!("densefew-gale-{}.json", std::process::id()));
    let out = densefew(&[
        "--json",
        "dualize",
        &fixture(),
        "--relations",
        "1,1,1,1;2,2,1,-3",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let gale: GaleFile =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let system: GaleSystem = gale.to_system().unwrap();
    assert_eq!(GaleFile::from_system(&system), gale);
    let core_json = serde_json::to_string(&system).unwrap();
    assert_eq!(
        serde_json::from_str::<GaleSystem>(&core_json).unwrap(),
        system
    );
    assert_eq!(system.h.len(), 2);
}
