use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curveguide")).arg("--out").arg(out).args(args).output().unwrap()
}

fn json(path: impl AsRef<Path>) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn bad_ratio_is_a_validation_error() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["decompose", "--type", "median", "--K", "1.5"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!d.path().join("decomposition.json").exists());
}

#[test]
fn unknown_fixture_is_a_validation_error() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(d.path(), &["make-feature", "no-such-part"]).status.code(), Some(2));
}

#[test]
fn missing_artifact_is_a_runtime_error() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["simulate", "--set-point", "100", "--toolpath", "absent.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn median_decomposition_has_four_areas() {
    let d = tempfile::tempdir().unwrap();
    let o = run(d.path(), &["decompose", "--type", "median", "--K", "0.75", "--levels", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(d.path().join("decomposition.json"))["areas"].as_array().unwrap().len(), 4);
}

#[test]
fn toolpath_simulate_report_chain() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path();
    let flags = ["--fixture", "flat-straight"];
    for args in [
        &["make-feature", "flat-straight"][..],
        &["toolpath"],
        &["simulate", "--set-point", "100"],
        &["report"],
        &["simulate", "--set-point", "50", "--output", "sim-slow.json"],
        &["report", "--sim", "sim-slow.json", "--output", "report-slow.json"],
        &["toolpath", "--strategy", "parallel-planes", "--output", "planes.json"],
        &["simulate", "--set-point", "100", "--toolpath", "planes.json", "--output", "sim-planes.json"],
        &["report", "--toolpath", "planes.json", "--sim", "sim-planes.json", "--output", "report-planes.json"],
        &["report", "--compare", "report.json", "report-planes.json"],
    ] {
        let o = run(p, &[args, &flags[..]].concat());
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let mixed = run(p, &["report", "--compare", "report.json", "report-slow.json"]);
    assert_eq!(mixed.status.code(), Some(2));
    assert!(p.join("toolpath.nc").exists());
    let sim = json(p.join("sim.json"));
    assert!(sim["total_time_s"].as_f64().unwrap() > 0.0);
    let fast = json(p.join("report.json"))["total_time_s"].as_f64().unwrap();
    let slow = json(p.join("report-slow.json"))["total_time_s"].as_f64().unwrap();
    assert!(slow > fast);
    let csv = std::fs::read_to_string(p.join("comparison.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    assert!(p.join("report-feed-map.svg").exists());
}

#[test]
fn repeated_runs_write_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        let o = run(d.path(), &["net", "--K", "0.25"]);
        assert!(o.status.success());
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("net.json")).unwrap();
    assert_eq!(read(&a), read(&b));
}
