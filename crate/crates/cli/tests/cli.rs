use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use permbound_cli::matrix_file::MatrixFile;
use serde_json::Value;
use tempfile::TempDir;

fn permbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permbound"))
        .args(args)
        .env("PERMBOUND_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn ones_csv(dir: &Path) -> PathBuf {
    write(dir, "ones.csv", "1,1,1\n1,1,1\n1,1,1\n")
}

#[test]
fn bound_all_ones() {
    let dir = TempDir::new().unwrap();
    let out = permbound(&["bound", ones_csv(dir.path()).to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["process_bound"], "8");
    assert_eq!(r["rowsum_bound"], "27");
    assert_eq!(r["exact_perm"], "6");
    assert_eq!(r["arithmetic"], "rational");
}

#[test]
fn bound_identity() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "id.csv", "1,0,0\n0,1,0\n0,0,1\n");
    let r = json(&permbound(&["bound", path.to_str().unwrap()]));
    for key in ["process_bound", "rowsum_bound", "exact_perm"] {
        assert_eq!(r[key], "1", "{key}");
    }
}

#[test]
fn negative_entry_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "neg.csv", "1,-1\n0,1\n");
    let out = permbound(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "NegativeInput");
    assert_eq!(err["error"]["exit_code"], 2);
}

#[test]
fn parse_errors_and_zero_pivots() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.csv", "1,x\n0,1\n");
    let out = permbound(&["bound", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "ParseError");

    let singular = write(dir.path(), "zero.csv", "0,1\n1,0\n");
    let out = permbound(&["bound", singular.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "ZeroPivot");
}

#[test]
fn gram_json_with_negative_entries() {
    let dir = TempDir::new().unwrap();
    let path = write(
        dir.path(),
        "g.json",
        r#"{"n": 2, "kind": "gram", "factor": [[1, -1], [0, 1]]}"#,
    );
    let out = permbound(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    // A = [[1,-1],[-1,2]]: per = 3, pivots 1 and 2 + 1 = 3
    assert_eq!(r["exact_perm"], "3");
    assert_eq!(r["process_bound"], "3");
    assert_eq!(r["kind"], "gram");
    assert!(r["rowsum_bound"].is_null());
}

#[test]
fn bound_flags() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "a.csv", "1,2,0\n3,1,1\n1,2,1\n");
    let p = path.to_str().unwrap();
    let r = json(&permbound(&["bound", p, "--ordering", "3,1,2", "--snapshots", "--exact-max", "0"]));
    assert_eq!(r["ordering"], serde_json::json!([3, 1, 2]));
    assert_eq!(r["snapshots"].as_array().unwrap().len(), 3);
    assert_eq!(r["pivots"].as_array().unwrap().len(), 3);
    assert!(r.get("exact_perm").is_none());

    let r = json(&permbound(&["bound", p, "--arithmetic", "float", "--timing"]));
    assert_eq!(r["arithmetic"], "float");
    assert!(r["elapsed_ms"].is_string());

    let out_path = dir.path().join("report.json");
    let out = permbound(&["bound", p, "--out", out_path.to_str().unwrap()]);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r["id"], "a");
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "a.csv", "1/2,2,0.25\n3,1,1\n1,2,1\n");
    let p = path.to_str().unwrap();
    for arith in ["rational", "float"] {
        let a = permbound(&["bound", p, "--arithmetic", arith, "--snapshots"]);
        let b = permbound(&["bound", p, "--arithmetic", arith, "--snapshots"]);
        assert_eq!(a.stdout, b.stdout);
    }
    let args = ["family", "random-dd", "--n", "5", "--eps", "1/2", "--delta", "1/5", "--seed", "3", "--count", "6"];
    assert_eq!(permbound(&args).stdout, permbound(&args).stdout);
}

#[test]
fn family_examples() {
    let r = lines(&permbound(&["family", "exp", "--n", "3", "--c", "2"]));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["process_bound"], "55/32");

    let r = lines(&permbound(&["family", "allones", "--n", "4"]));
    assert_eq!(r[0]["process_bound"], "64");
    assert_eq!(r[0]["exact_perm"], "24");

    let out = permbound(&["family", "random-dd", "--n", "4", "--eps", "1", "--delta", "1/12", "--seed", "7"]);
    let r = lines(&out);
    assert_eq!(r[0]["diag_dominance"]["certified"], true);
    assert_eq!(r[0]["diag_dominance"]["bound"], "16");
}

#[test]
fn family_sweeps_stream_in_order() {
    let r = lines(&permbound(&["family", "allones", "--n", "2", "--count", "5"]));
    let ids: Vec<&str> = r.iter().map(|v| v["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["allones-n2", "allones-n3", "allones-n4", "allones-n5", "allones-n6"]);
    // 2^(n(n-1)/2)
    assert_eq!(r[4]["process_bound"], "32768");

    let r = lines(&permbound(&["family", "exp", "--n", "16", "--c", "sqrt", "--count", "2", "--exact-max", "0"]));
    assert_eq!(r[0]["id"], "exp-n16-csqrt");
    assert_eq!(r[0]["arithmetic"], "float");
    let bound: f64 = r[0]["process_bound"].as_str().unwrap().parse().unwrap();
    assert!((bound - 2.788025934).abs() < 1e-6);
}

#[test]
fn family_parameter_errors() {
    for args in [
        vec!["family", "exp", "--n", "3"],
        vec!["family", "exp", "--n", "3", "--c", "0"],
        vec!["family", "random-dd", "--n", "3", "--eps", "0", "--delta", "1"],
        vec!["family", "allones", "--n", "0"],
    ] {
        let out = permbound(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(err["error"]["kind"], "ParameterOutOfRange", "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_permbound"))
        .args(["family", "allones", "--n", "2"])
        .env("PERMBOUND_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_all_ones() {
    let dir = TempDir::new().unwrap();
    let out = permbound(&["verify", ones_csv(dir.path()).to_str().unwrap(), "--suite", "all"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 10);
}

#[test]
fn verify_identity_psd() {
    let dir = TempDir::new().unwrap();
    let path = write(
        dir.path(),
        "id.json",
        r#"{"n": 3, "kind": "gram", "factor": [[1,0,0],[0,1,0],[0,0,1]]}"#,
    );
    let out = permbound(&["verify", path.to_str().unwrap(), "--suite", "psd"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");

    let plain = write(dir.path(), "id.csv", "1,0\n0,1\n");
    let out = permbound(&["verify", plain.to_str().unwrap(), "--suite", "psd"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_majorant_certificates() {
    let dir = TempDir::new().unwrap();
    let input = ones_csv(dir.path());
    // the solved majorant of the all-ones matrix
    let good = write(
        dir.path(),
        "good.json",
        r#"{"b": [[1,1,1],[1,2,2],[1,2,6]], "mode": "equality"}"#,
    );
    let out = permbound(&["verify", input.to_str().unwrap(), "--suite", "schur", "--certificate", good.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("PASS majorant-certificate: bound 12"), "{text}");

    let tampered = write(
        dir.path(),
        "bad.json",
        r#"{"b": [[1,1,1],[1,2,2],[1,0,6]], "mode": "inequality"}"#,
    );
    let out = permbound(&["verify", input.to_str().unwrap(), "--suite", "schur", "--certificate", tampered.to_str().unwrap()]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(1), "{text}");
    assert!(text.contains("FAIL majorant-certificate: ConditionViolated at (3, 2)"), "{text}");
}

#[test]
fn verify_boundedness_needs_unit_diagonal() {
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "a.csv", "2,1\n1,1\n");
    let out = permbound(&["verify", path.to_str().unwrap(), "--suite", "boundedness"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("SKIP boundedness"));

    let unit = write(dir.path(), "u.csv", "1,2,0\n3,1,1\n1,2,1\n");
    let out = permbound(&["verify", unit.to_str().unwrap(), "--suite", "boundedness"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("PASS entry-bound"));
    assert!(text.contains("PASS cycle-sum"));
}

#[test]
fn file_round_trips() {
    let csv = "1/3,2,0\n-7/2,0.125,5\n0,0,1\n";
    let f = MatrixFile::parse_csv(csv).unwrap();
    assert_eq!(MatrixFile::parse_csv(&f.to_csv()).unwrap(), f);
    assert_eq!(MatrixFile::parse_json(&f.to_json()).unwrap(), f);
    let g = MatrixFile::parse_json(r#"{"kind": "gram", "factor": [["1/2", -1], [2, 3]]}"#).unwrap();
    assert_eq!(MatrixFile::parse_json(&g.to_json()).unwrap(), g);

    // a file written by to_json is accepted by the binary
    let dir = TempDir::new().unwrap();
    let path = write(dir.path(), "g.json", &g.to_json());
    let out = permbound(&["bound", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
