use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn whitney(args: &[&str]) -> Output {
    whitney_env(args, None)
}

fn whitney_env(args: &[&str], tolerances: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_whitney"));
    cmd.args(args).env_remove("WHITNEY_TOLERANCES");
    if let Some(p) = tolerances {
        cmd.env("WHITNEY_TOLERANCES", p);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn linear_two_points() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "lin.csv", "x,f\n0,0\n1,1\n");
    let samples = dir.path().join("s.csv");
    let o = whitney(&[
        "extend", "-i", input.to_str().unwrap(), "-m", "1", "-p", "2", "--oracle", "--samples", "11", "--out",
        samples.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = json(&o);
    assert_eq!(doc["schema"], "trace-report/1");
    let r = &doc["report"];
    for key in ["n_mp", "t_mp", "whitney_seminorm", "oracle_seminorm"] {
        assert!((num(&r[key]) - 1.0).abs() < 1e-12, "{key}: {}", r[key]);
    }
    let csv = std::fs::read_to_string(&samples).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,F,F1"));
    // 11 grid points plus the two data abscissae
    assert_eq!(lines.count(), 13);
    assert_eq!(num(&doc["sample_rows"]), 13.0);
}

#[test]
fn samples_round_trip() {
    let dir = TempDir::new().unwrap();
    let data = [(0.0, 1.5), (0.37, -2.0), (1.1, 0.25), (2.9, 4.0), (3.0, 3.5), (7.5, -1.0)];
    let text: String = data.iter().map(|(x, f)| format!("{x},{f}\n")).collect();
    let input = write(&dir, "d.csv", &text);
    let samples = dir.path().join("s.csv");
    let o = whitney(&[
        "extend", "-i", input.to_str().unwrap(), "-m", "3", "-p", "2", "--samples", "50", "--pad", "0.2", "--out",
        samples.to_str().unwrap(), "--report", dir.path().join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    let csv = std::fs::read_to_string(&samples).unwrap();
    assert!(csv.starts_with("x,F,F1,F2,F3\n"));
    let rows: Vec<Vec<f64>> = csv.lines().skip(1).map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    for (x, f) in data {
        let row = rows.iter().find(|r| r[0] == x).expect("data abscissa sampled");
        assert!((row[1] - f).abs() <= 1e-9 * f.abs(), "{x}: {} vs {f}", row[1]);
    }
    // the sample file is itself valid input
    let o = whitney(&["functionals", "-i", samples.to_str().unwrap(), "-m", "1", "-p", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn quadratic_data_has_zero_seminorm_for_m3() {
    let dir = TempDir::new().unwrap();
    let text: String = [-2.0, -0.5, 0.0, 1.0, 3.0].iter().map(|x: &f64| format!("{x},{}\n", x * x)).collect();
    let input = write(&dir, "q.csv", &text);
    let o = whitney(&["extend", "-i", input.to_str().unwrap(), "-m", "3", "-p", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(num(&json(&o)["report"]["whitney_seminorm"]), 0.0);
}

#[test]
fn reports_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.json", r#"{"points": [0, 0.5, 2, 2.25, 5], "values": [1, -1, 3, 0, 2]}"#);
    let args = ["extend", "-i", input.to_str().unwrap(), "-m", "2", "-p", "1.5"];
    let (a, b) = (whitney(&args), whitney(&args));
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("\"whitney_seminorm\": "));
}

#[test]
fn parse_failures_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.csv", "x,f\n0,1\n1,oops\n2,3\n");
    let o = whitney(&["extend", "-i", bad.to_str().unwrap(), "-m", "1", "-p", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("row 3"), "{}", stderr(&o));
    assert_eq!(stderr(&o).lines().count(), 1);
    let dup = write(&dir, "dup.csv", "0,1\n1,2\n1,3\n");
    assert_eq!(code(&whitney(&["functionals", "-i", dup.to_str().unwrap(), "-m", "1", "-p", "2"])), 2);
    let missing = dir.path().join("none.csv");
    assert_eq!(code(&whitney(&["functionals", "-i", missing.to_str().unwrap(), "-m", "1", "-p", "2"])), 2);
}

#[test]
fn insufficient_data_exits_3() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "short.csv", "0,1\n1,2\n2,0\n");
    let o = whitney(&["extend", "-i", input.to_str().unwrap(), "-m", "3", "-p", "2"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let empty = write(&dir, "empty.csv", "# nothing\n");
    assert_eq!(code(&whitney(&["functionals", "-i", empty.to_str().unwrap(), "-m", "1", "-p", "2"])), 3);
}

#[test]
fn invalid_configuration_exits_4() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.csv", "0,1\n1,2\n2,0\n");
    let path = input.to_str().unwrap();
    for args in [
        vec!["extend", "-i", path, "-m", "0", "-p", "2"],
        vec!["extend", "-i", path, "-m", "9", "-p", "2"],
        vec!["extend", "-i", path, "-m", "1", "-p", "1"],
        vec!["extend", "-i", path, "-m", "1", "-p", "abc"],
        vec!["extend", "-i", path, "-m", "1"],
        vec!["constants", "-m", "0"],
        vec!["frobnicate"],
    ] {
        assert_eq!(code(&whitney(&args)), 4, "{args:?}");
    }
    let tol = write(&dir, "tol.toml", "no_such_field = 1.0\n");
    let o = whitney_env(&["extend", "-i", path, "-m", "1", "-p", "2"], Some(&tol));
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn tolerance_override_is_reported() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "d.csv", "0,1\n1,2\n2,0\n");
    let tol = write(&dir, "tol.toml", "tail_rel = 1e-4\n");
    let o = whitney_env(&["functionals", "-i", input.to_str().unwrap(), "-m", "1", "-p", "2"], Some(&tol));
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let used = &json(&o)["constants_used"];
    assert_eq!(num(&used["tail_rel"]), 1e-4);
    assert_eq!(num(&used["continuity_rel"]), 1e-9);
}

#[test]
fn functionals_examples() {
    let dir = TempDir::new().unwrap();
    let constant = write(&dir, "c.csv", "0,3\n1,3\n2.5,3\n4,3\n");
    let o = whitney(&["functionals", "-i", constant.to_str().unwrap(), "-m", "2", "-p", "2", "--oracle"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = json(&o);
    for key in ["n_mp", "t_mp", "n_infty", "sharp_lp", "jet_full", "jet_value", "oracle_seminorm"] {
        assert_eq!(num(&doc[key]), 0.0, "{key}");
    }

    let alternating = write(&dir, "a.csv", "0,1\n1,-1\n2,1\n3,-1\n4,1\n");
    let o = whitney(&["functionals", "-i", alternating.to_str().unwrap(), "-m", "2", "-p", "2"]);
    let doc = json(&o);
    assert_eq!(num(&doc["n_infty"]), 2.0);
    assert_eq!(num(&doc["n_infty_scaled"]), 4.0);

    let o = whitney(&["functionals", "-i", alternating.to_str().unwrap(), "-m", "2", "-p", "inf"]);
    let doc = json(&o);
    assert_eq!(doc["p"], "inf");
    let bracket = doc["linfty_bracket"].as_array().expect("bracket present");
    assert!(num(&bracket[0]) <= num(&bracket[1]));
}

#[test]
fn constants_command() {
    let o = whitney(&["constants", "-m", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("gamma#_m        2"), "{text}");
    assert!(text.contains("theta_m         2.000000000000000"), "{text}");
    assert!(stdout(&whitney(&["constants", "-m", "1"])).contains("gamma#_m        1"));

    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    let o = whitney(&["constants", "-m", "5", "--json", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let c = &doc["constants"];
    let (lo, hi, th) = (num(&c["gamma_lower"]), num(&c["gamma_upper"]), num(&c["theta"]));
    assert!((lo - std::f64::consts::FRAC_PI_2.powi(4)).abs() < 1e-14);
    assert_eq!(hi, 4.0 * 9f64.powi(5));
    assert!(lo < th && th < hi);
}

#[test]
fn selftest_runs_deterministically() {
    let a = whitney(&["selftest", "--seed", "5", "--instances", "4"]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let text = stdout(&a);
    assert!(text.contains("empirical constants") && text.contains("theta_m"));
    assert!(text.ends_with("selftest passed\n"));
    let b = whitney(&["selftest", "--seed", "5", "--instances", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn perturbed_gap_is_caught() {
    let o = whitney(&["selftest", "--instances", "3", "--perturb-gap"]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).contains("FAIL m=2 smoothness"), "{}", stdout(&o));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(code(&whitney(&["--help"])), 0);
    assert_eq!(code(&whitney(&["--version"])), 0);
    assert!(stdout(&whitney(&["--help"])).contains("WHITNEY_TOLERANCES"));
}
