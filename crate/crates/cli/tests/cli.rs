use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn srgkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srgkit")).args(args).output().expect("run srgkit")
}

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("specs").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn margin_of_first_order_lag() {
    let o = srgkit(&["margin", "--tf", "1/(s+1)"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("stable: true"));
    assert!(text.contains("margin: 1.000000000000000e0"));
}

#[test]
fn exit_codes() {
    let bad = srgkit(&["margin", "--tf", "1/(s+"]);
    assert_eq!(bad.status.code(), Some(2));
    let unstable = srgkit(&["margin", "--tf", "1/(s-1)"]);
    assert_eq!(unstable.status.code(), Some(2));
    let usage = srgkit(&["srg", "class", "--kind", "nonsense"]);
    assert_eq!(usage.status.code(), Some(2));
    let secant = srgkit(&["analyze", spec("secant.json").to_str().unwrap()]);
    assert_eq!(secant.status.code(), Some(1));
    assert!(stdout(&secant).contains("stable: false"));
}

#[test]
fn analyze_examples() {
    let o = srgkit(&["analyze", spec("smallgain.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gain_bound: 1.000000000000000e0"));
    let o = srgkit(&["analyze", spec("passivity.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn analyze_writes_outputs_next_to_the_document() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("lag.json");
    fs::copy(spec("lag_nyquist.json"), &doc).unwrap();
    let o = srgkit(&["analyze", doc.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let trace = fs::read_to_string(dir.path().join("lag_nyquist_trace.csv")).unwrap();
    assert!(trace.starts_with("# srgkit "));
    assert!(fs::read_to_string(dir.path().join("lag_nyquist.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn sweep_tau_is_deterministic_and_precise() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = srgkit(&["sweep-tau", "--tf", "1/(s+1)", "--taus", "16", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ta = fs::read(&a).unwrap();
    assert_eq!(ta, fs::read(&b).unwrap());
    let text = String::from_utf8(ta).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "tau,r_tau");
    assert_eq!(rows.len(), 17);
    let last: Vec<&str> = rows[16].split(',').collect();
    assert_eq!(last[0], "1.000000000000000e0");
    let mantissa = last[1].split('e').next().unwrap();
    assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 16);
    let first: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((first - 1e4).abs() < 1e-6);
}

#[test]
fn srg_json_round_trips_through_margin() {
    let dir = tempfile::tempdir().unwrap();
    let region = dir.path().join("cascade.json");
    let o = srgkit(&["srg", "cascade", "--gammas", "1,1,1", "--out", region.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = srgkit(&["margin", "--loop", region.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().find(|l| l.starts_with("margin:")).unwrap().to_string();
    let m: f64 = line.trim_start_matches("margin:").trim().parse().unwrap();
    assert!((m - 7.0 / 9.0).abs() < 1e-9, "{m}");
}

#[test]
fn sample_with_region_check() {
    let dir = tempfile::tempdir().unwrap();
    let region = dir.path().join("lag.json");
    let o = srgkit(&["srg", "lti", "--tf", "1/(s+1)", "--out", region.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let op = dir.path().join("op.json");
    fs::write(&op, r#"{"type":"lti","tf":"1/(s+1)"}"#).unwrap();
    let out = dir.path().join("cloud.csv");
    let args = [
        "sample", "--op", op.to_str().unwrap(), "--strategy", "random", "--n", "40",
        "--horizon", "10", "--seed", "3", "--region", region.to_str().unwrap(), "--tol", "2e-2",
        "--out", out.to_str().unwrap(),
    ];
    let o = srgkit(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let first = fs::read(&out).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert!(text.lines().any(|l| l == "gain,angle,slack"));
    assert!(text.contains("violations 0"));
    srgkit(&args);
    assert_eq!(first, fs::read(&out).unwrap());

    let tight = srgkit(&[
        "sample", "--op", op.to_str().unwrap(), "--strategy", "random", "--n", "40",
        "--horizon", "10", "--region", spec("unit_point.json").to_str().unwrap(),
    ]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn repro_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = srgkit(&["repro", "third-order", "--out-dir", d]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = srgkit(&["repro", "cascade", "--out-dir", d]);
    assert_eq!(o.status.code(), Some(0));
    let names: Vec<String> = fs::read_dir(d).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    for f in ["cascade.csv", "cascade.svg", "cascade_inverse.svg"] {
        assert!(names.iter().any(|n| n == f), "{f} missing from {names:?}");
    }
    assert!(names.iter().any(|n| n.ends_with(".csv") && n != "cascade.csv"));
    let csv = fs::read_to_string(dir.path().join("cascade.csv")).unwrap();
    let row3 = csv.lines().find(|l| l.starts_with("3,")).unwrap();
    assert!(row3.contains("-1.250000000000000e-1"), "{row3}");
}
