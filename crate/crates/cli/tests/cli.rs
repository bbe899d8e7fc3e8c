use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

mod support;

const Z2_PLUS_1: &str = r#"{"d":2,"U":[1,0,1],"V":[0,0,1]}"#;
const Z2: &str = r#"{"d":2,"U":[1,0,0],"V":[0,0,1]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arithdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"))
}

fn assert_valid(name: &str, v: &Value) {
    let schema: Value = serde_json::from_str(&fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let errors = support::validate(&schema, v);
    assert!(errors.is_empty(), "{name}: {errors:?}\n{v:#}");
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn canheight_both_methods_agree() {
    let v = json(&["canheight", "--map", Z2_PLUS_1, "--point", "0/1", "--tol", "1e-8", "--method", "both"]);
    assert_valid("canheight", &v);
    let g = f(&v["global"]["value"]);
    let l = f(&v["local"]["total"]);
    assert!((g - l).abs() < 2e-8, "{g} vs {l}");
    assert_eq!(v["agree"], true);
    // log 677 / 32 brackets it from below, as in the orbit 0, 1, 2, 5, 26, 677
    assert!(l > 677f64.ln() / 32.0 && l < 677f64.ln() / 32.0 + 1e-3);
}

#[test]
fn preperiodic_points_of_z_squared() {
    let v = json(&["preperiodic", "--map", Z2]);
    assert_valid("preperiodic", &v);
    let pts: Vec<&str> = v["points"].as_array().unwrap().iter().map(|p| p.as_str().unwrap()).collect();
    assert_eq!(pts, ["[0:1]", "[1:-1]", "[1:0]", "[1:1]"]);
    let v = json(&["preperiodic", "--power", "2"]);
    assert_eq!(v["count"], 4);
}

#[test]
fn lehmer_mahler_measure() {
    let v = json(&["mahler", "--poly", "1,1,0,-1,-1,-1,-1,-1,0,1,1"]);
    assert_valid("mahler", &v);
    // Real root of Lehmer's polynomial outside the unit circle, by bisection
    // on the exact integer coefficients.
    let lehmer = |x: f64| [1.0, 1.0, 0.0, -1.0, -1.0, -1.0, -1.0, -1.0, 0.0, 1.0, 1.0]
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc * x + c);
    let (mut lo, mut hi) = (1.1f64, 1.3f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (lehmer(lo) < 0.0) == (lehmer(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((f(&v["measure"]) - lo).abs() < 1e-12, "{} vs {lo}", v["measure"]);
}

#[test]
fn every_json_command_matches_its_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = dir.path().join("cloud.csv");
    fs::write(&cloud, "re,im\n1,0\n0,1\n-1,0\n0,-1\n0.5,0.5\n").unwrap();
    let cloud = cloud.to_str().unwrap();
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("height", vec!["height", "--point", "[6:-4:10]"]),
        ("schanuel", vec!["schanuel", "--k", "1", "--bound", "50"]),
        ("algheight", vec!["algheight", "--poly", "-1,0,2"]),
        ("rou", vec!["rou", "--poly", "1,1,1"]),
        ("rou", vec!["rou", "--poly", "-1,0,2"]),
        ("canheight", vec!["canheight", "--power", "2", "--point", "3/2"]),
        ("tdiam", vec!["tdiam", "--power", "2", "--n", "4", "--restarts", "4"]),
        ("discrepancy", vec!["discrepancy", "--power", "2", "--poly", "-2,0,1"]),
        ("discrepancy", vec!["discrepancy", "--map", Z2_PLUS_1, "--poly", "-2,0,1"]),
        ("baker", vec!["baker", "--power", "2", "--roots-of-unity", "16"]),
        ("baker", vec!["baker", "--power", "2", "--points-file", cloud]),
        ("energy", vec!["energy", "--power", "2", "--cloud", cloud]),
        ("torus-height", vec!["torus", "height", "--point", r#"[{"rational":"2"},{"minpoly":[-2,0,0,1],"root_index":0}]"#]),
        ("torus-pushforward", vec!["torus", "pushforward", "--point", r#"[{"rational":"2"},{"rational":"3"}]"#, "--exponents", "1,-1"]),
        ("torus-pushforward", vec!["torus", "pushforward", "--point", r#"[{"minpoly":[-2,0,1],"root_index":0},{"rational":"3"}]"#, "--exponents", "2,1"]),
        ("torus-subadditivity", vec!["torus", "subadditivity", "--alpha", "poly:-2,0,1", "--beta", "poly:-2,0,1"]),
        ("torus-subadditivity", vec!["torus", "subadditivity", "--alpha", "2", "--beta", "1/2"]),
    ];
    for (schema, args) in cases {
        assert_valid(schema, &json(&args));
    }
}

#[test]
fn algheight_breakdown() {
    // (2X - 1): h(1/2) = log 2, all of it at the prime 2
    let v = json(&["algheight", "--poly", "-1,2"]);
    assert!((f(&v["height"]) - 2f64.ln()).abs() < 1e-15);
    assert!((f(&v["places"]["2"]) - 2f64.ln()).abs() < 1e-15);
    assert_eq!(v["places_log_p_multiple"]["2"], "1");
}

#[test]
fn torus_examples() {
    let v = json(&["torus", "height", "--point", r#"[{"rational":"2"},{"rational":"1/2"}]"#]);
    assert!((f(&v["height"]) - 2.0 * 2f64.ln()).abs() < 1e-15);
    let v = json(&["torus", "pushforward", "--point", r#"[{"rational":"4"},{"rational":"2"}]"#, "--exponents", "1,-2"]);
    assert_eq!(v["exact"], "1");
    assert_eq!(f(&v["height"]), 0.0);
    let out = run(&["torus", "pushforward", "--point", r#"[{"rational":"4"},{"rational":"2"}]"#, "--exponents", "0,0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_outputs_are_bit_identical_across_runs() {
    let runs: Vec<Vec<&str>> = vec![
        vec!["enumerate", "--k", "2", "--bound", "1.5"],
        vec!["goodred", "--map", Z2_PLUS_1, "--primes-up-to", "30"],
        vec!["julia-sample", "--map", Z2_PLUS_1, "--grid", "9", "--extent", "1.5"],
        vec!["bilu", "--family", "rou:30", "--exponents", "1,-1,2,30"],
        vec!["bilu", "--family", "poly:-2,0,0,0,1", "--exponents", "1,2,4"],
    ];
    for args in runs {
        let a = ok(&args);
        let b = ok(&args);
        assert_eq!(a, b, "{args:?}");
        let mut r = csv::Reader::from_reader(a.as_bytes());
        assert!(r.records().all(|rec| rec.is_ok()), "{args:?}");
    }
}

#[test]
fn seeded_commands_are_deterministic() {
    let args = ["tdiam", "--map", Z2_PLUS_1, "--n", "5", "--restarts", "4", "--seed", "11"];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn enumerate_matches_count() {
    let out = ok(&["enumerate", "--k", "1", "--bound", "0.7"]);
    // H <= 2 in P^1: [0:1] [1:0] [1:1] [1:-1] [1:2] [1:-2] [2:1] [2:-1]
    assert_eq!(out.lines().count(), 1 + 8);
    assert!(out.starts_with("x0,x1,height\n"));
}

#[test]
fn goodreduction_table() {
    let out = ok(&["goodred", "--map", r#"{"d":2,"U":[1,0,0],"V":[0,0,3]}"#, "--primes-up-to", "5"]);
    assert_eq!(
        out,
        "prime,valuation_of_resultant,good_reduction\n2,0,true\n3,2,false\n5,0,true\n"
    );
}

#[test]
fn manifest_records_outputs_with_error_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    let o = dir.path().join("o.csv");
    let args = [
        "julia-sample", "--power", "2", "--grid", "4",
        "--manifest", m.to_str().unwrap(), "--output", o.to_str().unwrap(), "--seed", "3",
    ];
    assert!(ok(&args).is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&m).unwrap()).unwrap();
    assert_valid("manifest", &v);
    assert_eq!(v["command"], "julia-sample");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["arguments"]["grid"], 4);
    assert_eq!(fs::read_to_string(&o).unwrap().lines().count(), 17);

    let args = ["tdiam", "--power", "2", "--n", "3", "--restarts", "2", "--manifest", m.to_str().unwrap()];
    ok(&args);
    let v: Value = serde_json::from_str(&fs::read_to_string(&m).unwrap()).unwrap();
    assert_valid("manifest", &v);
    assert_eq!(v["outputs"]["delta_n"]["error"], "inf");
    for (_, out) in v["outputs"].as_object().unwrap() {
        assert!(out.get("value").is_some() && out.get("error").is_some());
    }
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let text = ok(&["height", "--point", "3/2"]);
    assert!(text.contains("\"height\": 1.0986122886681098e0"), "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["height"]).status.code(), Some(2));
    assert_eq!(run(&["height", "--point", "1/2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["canheight", "--point", "1/2"]).status.code(), Some(2));

    for args in [
        vec!["height", "--point", "0/0"],
        vec!["mahler", "--poly", "1,x"],
        vec!["canheight", "--map", r#"{"d":2,"U":[1,0,0],"V":[1,0,0]}"#, "--point", "1"],
        vec!["algheight", "--poly", "1,2,1"],
        vec!["enumerate", "--k", "3", "--bound", "30"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let v: Value = serde_json::from_str(&String::from_utf8(out.stderr).unwrap()).unwrap();
        assert_valid("error", &v);
    }
}
