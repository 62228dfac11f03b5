use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sweepcover"));
    c.env("SWEEPCOVER_LOG", "off");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_is_byte_identical_for_a_fixed_seed() {
    for kind in ["euclidean", "random-metric", "line", "star"] {
        let a = run(&["gen", "--kind", kind, "--n", "12", "--seed", "42"]);
        let b = run(&["gen", "--kind", kind, "--n", "12", "--seed", "42"]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{kind}");
    }
    let c = run(&["gen", "--kind", "euclidean", "--n", "12", "--seed", "43"]);
    let a = run(&["gen", "--kind", "euclidean", "--n", "12", "--seed", "42"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_line_has_unit_spaced_points() {
    let out = run(&["gen", "--kind", "line", "--n", "5", "--seed", "1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 5);
    for (i, p) in pts.iter().enumerate() {
        assert_eq!(p[0].as_f64().unwrap(), i as f64);
        assert_eq!(p[1].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn gen_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inst.json");
    let out = run(&["gen", "--kind", "star", "--n", "6", "--sensors", "2", "--output", arg(&path)]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n"], 6);
    assert_eq!(v["sensors"], 2);
}

#[test]
fn as_many_sensors_as_points_cover_everything() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "i.json",
        r#"{"points": [[0,0],[4,0],[0,7],[9,9],[3,5]], "sensors": 5, "speed": 1, "period": 1}"#,
    );
    let out = run(&["solve-bsc", "--input", arg(&inst), "--oracle"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["covered"], 5);
    assert_eq!(v["result"]["upper_bound"], 5);
    assert_eq!(v["result"]["ratio"].as_f64().unwrap(), 1.0);
    assert_eq!(v["ok"], true);
    assert_eq!(v["instance_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn bsc_report_is_deterministic_apart_from_timings() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.json");
    let g = run(&["gen", "--kind", "euclidean", "--n", "9", "--seed", "5", "--sensors", "2", "--period", "0.5",
        "--output", arg(&inst)]);
    assert!(g.status.success());
    let mut a = stdout_json(&run(&["solve-bsc", "--input", arg(&inst)]));
    let mut b = stdout_json(&run(&["solve-bsc", "--input", arg(&inst)]));
    a.as_object_mut().unwrap().remove("timings_ms");
    b.as_object_mut().unwrap().remove("timings_ms");
    assert_eq!(a, b);
    for key in ["k_star", "budget_estimate", "trim_rounds", "mode", "ls", "allocation"] {
        assert!(a["diagnostics"].get(key).is_some(), "missing diagnostic {key}");
    }
}

#[test]
fn verify_accepts_solver_output_and_rejects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(
        dir.path(),
        "i.json",
        r#"{"points": [[0,0],[1,0],[2,0],[3,0],[4,0]], "sensors": 2, "speed": 1, "period": 2}"#,
    );
    let report = dir.path().join("r.json");
    let s = run(&["solve-bsc", "--input", arg(&inst), "--output", arg(&report)]);
    assert!(s.status.success());

    let ok = run(&["verify", "--input", arg(&inst), "--schedule", arg(&report)]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));

    // Stretch one sweep interval beyond a*t/2.
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let first = &mut v["result"]["schedule"]["assignments"][0];
    let s0 = first["s"].as_f64().unwrap();
    first["e"] = Value::from(s0 + 5.0);
    let tampered = write(dir.path(), "t.json", &v.to_string());
    let bad = run(&["verify", "--input", arg(&inst), "--schedule", arg(&tampered)]);
    assert!(!bad.status.success());
    let out = stdout_json(&bad);
    let violations = out["result"]["violations"].as_array().unwrap();
    assert!(!violations.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("violation"));
}

#[test]
fn verify_rejects_a_duplicated_vertex() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", r#"{"points": [[0,0],[1,0],[2,0]], "sensors": 1, "period": 2}"#);
    let sched = write(
        dir.path(),
        "s.json",
        r#"{"paths": [[0,1,0]], "schedule": {"assignments": [{"sensor":0,"path":0,"s":0,"e":1}], "speed": 1, "period": 2}}"#,
    );
    let out = run(&["verify", "--input", arg(&inst), "--schedule", arg(&sched)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mop_on_the_unit_line() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", r#"{"points": [[0,0],[1,0],[2,0],[3,0],[4,0]]}"#);
    let out = run(&["solve-mop", "--input", arg(&inst), "--m", "1", "--budget", "1", "--oracle"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["result"]["spanned"], 2);
    assert_eq!(v["result"]["opt"], 2);
    assert!(v["result"]["cost"].as_f64().unwrap() <= 1.0 + 1e-9);
}

#[test]
fn kminwp_reports_a_consistent_mode() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", r#"{"points": [[0,0],[1,0],[2,0],[3,0],[4,0],[5,0]]}"#);
    let out = run(&["solve-kminwp", "--input", arg(&inst), "--m", "2", "--k", "4", "--oracle"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["certificates"]["mode_consistent"], true);
    assert!(v["result"]["paths"].as_array().unwrap().len() == 2);
}

#[test]
fn oracle_values() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", r#"{"points": [[0,0],[1,0],[2,0],[3,0]], "sensors": 4}"#);
    let value = |extra: &[&str]| {
        let mut args = vec!["oracle", "--input", arg(&inst)];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        stdout_json(&out)["result"]["value"].clone()
    };
    assert_eq!(value(&["--what", "kminwp", "--m", "1", "--k", "3"]).as_f64(), Some(2.0));
    assert_eq!(value(&["--what", "mop", "--m", "2", "--budget", "1"]).as_u64(), Some(3));
    assert_eq!(value(&["--what", "bsc-ub"]).as_u64(), Some(4));
    assert_eq!(value(&["--what", "pcp", "--m", "1", "--penalty", "0"]).as_f64(), Some(0.0));
    assert_eq!(value(&["--what", "pcf", "--m", "1", "--penalty", "10"]).as_f64(), Some(3.0));
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "i.json", r#"{"edges": [[0,1,1]], "n": 3}"#);
    let out = run(&["solve-bsc", "--input", arg(&inst)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not connected"));
}

#[test]
fn bench_small_suite_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("bench");
    let out = run(&["bench", "--suite", "small", "--oracle", "--threads", "2", "--output", arg(&out_dir)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut reader = csv::Reader::from_path(out_dir.join("bench.csv")).unwrap();
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["instance", "ratio", "UB", "covered", "time"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 50);
    for r in &rows {
        let ratio: f64 = r[1].parse().unwrap();
        let ub: usize = r[2].parse().unwrap();
        let covered: usize = r[3].parse().unwrap();
        assert!(covered <= ub);
        assert!((0.0..=1.0).contains(&ratio));
    }
    let svg = std::fs::read_to_string(out_dir.join("ratio_histogram.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("ratio min"));
}
