use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logcy3")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = run(&all);
    (serde_json::from_slice(&o.stdout).expect("json output"), code(&o))
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&run(&["validate", &fixture("p3-mixed.json")])), 0);
    let o = run(&["validate", &fixture("bad-nonprimitive-ray.json")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("non-primitive"));
    let o = run(&["validate", &fixture("bad-coordinate.json")]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("1/0") && err.contains("line"), "{err}");
    assert_eq!(code(&run(&["validate", "/nonexistent.json"])), 2);
}

#[test]
fn json_reports_are_deterministic() {
    for args in [
        vec!["invariants", "p3-mixed.json", "--seed", "11"],
        vec!["periods", "p3-conic.json", "--seed", "3"],
        vec!["oracle-check", "p1p1p1-curve.json"],
    ] {
        let args: Vec<String> =
            args.iter().map(|a| if a.ends_with(".json") { fixture(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut with_json = vec!["--json"];
        with_json.extend(&args);
        let a = run(&with_json);
        let b = run(&with_json);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert_eq!(v["exact"], Value::Bool(true));
        assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn invariants_report_period_triviality() {
    let (v, c) = json(&["invariants", &fixture("p3.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["period_trivial"], Value::Bool(true));
    assert_eq!(v["results"]["anticanonical_cube"], 64);
    assert_eq!(v["results"]["toric_boundary_complexity"], "0");
    let (v, _) = json(&["invariants", &fixture("p3-conic.json"), "--seed", "5"]);
    assert_eq!(v["results"]["period_trivial"], Value::Bool(false));
    assert_eq!(v["results"]["random_suite"]["torsor_identity"], Value::Bool(true));
    let text = String::from_utf8_lossy(&run(&["invariants", &fixture("p3-conic.json")]).stdout).to_string();
    assert!(text.contains("period trivial: no"), "{text}");
}

#[test]
fn unmarked_period_ignores_the_marking() {
    let (a, _) = json(&["periods", &fixture("p3-conic.json")]);
    let (b, _) = json(&["periods", &fixture("p3-conic.json"), "--marking", "2, 3/4, 1*i, -5, 7, 1/9+2*i"]);
    assert_ne!(a["results"]["marked"], b["results"]["marked"]);
    assert_eq!(a["results"]["unmarked"], b["results"]["unmarked"]);
    let o = run(&["periods", &fixture("p3-conic.json"), "--marking", "1, 2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn compare_and_recheck() {
    let conic = fixture("p3-conic.json");
    let corr = fixture("p3-conic.corr.json");
    for (other, kind, exit) in [("p3-conic-translated.json", "isomorphic", 0), ("p3-conic-perturbed.json", "distinct", 1)] {
        let other = fixture(other);
        let o = run(&["--json", "compare", &conic, &other, &corr]);
        assert_eq!(code(&o), exit);
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["results"]["verdict"]["verdict"], kind);
        let path = std::env::temp_dir().join(format!("logcy3-{kind}-{}.json", std::process::id()));
        std::fs::write(&path, &o.stdout).unwrap();
        let (r, c) = json(&["recheck", &conic, &other, path.to_str().unwrap()]);
        std::fs::remove_file(&path).ok();
        assert_eq!(c, 0, "{r}");
        assert_eq!(r["results"]["verified"], Value::Bool(true));
    }
}

#[test]
fn tampered_witness_fails_recheck() {
    let conic = fixture("p3-conic.json");
    let other = fixture("p3-conic-perturbed.json");
    let (mut v, _) = json(&["compare", &conic, &other]);
    v["results"]["verdict"]["certificate"]["witness"]["image_value"] = Value::String("-15/2".into());
    let path = std::env::temp_dir().join(format!("logcy3-tampered-{}.json", std::process::id()));
    std::fs::write(&path, v.to_string()).unwrap();
    let (r, c) = json(&["recheck", &conic, &other, path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(c, 1, "{r}");
}

#[test]
fn different_programs_are_not_isomorphic() {
    let (v, c) = json(&["compare", &fixture("p3-conic.json"), &fixture("p3-line.json")]);
    assert_ne!(c, 0, "{v}");
}

#[test]
fn oracle_check_detects_flipped_orientation() {
    assert_eq!(code(&run(&["oracle-check", &fixture("p3-conic.json")])), 0);
    assert_eq!(code(&run(&["oracle-check", &fixture("p3-conic.json"), "--flip-orientation"])), 1);
    assert_eq!(code(&run(&["oracle-check", &fixture("p3.json"), "--flip-orientation"])), 0);
}
