use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn twbetti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twbetti"))
        .args(args)
        .env_remove("ARR_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr))
    })
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn h1_on_a3() {
    let out = twbetti(&["h1", path(&data("a3.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["h1"], 1);
    assert_eq!(r["rank"], 11);
    assert_eq!(r["dim_a"], 12);
    assert_eq!(r["matrix"]["rows"], 14);
    assert_eq!(r["oracle"]["agrees"], true);
    assert_eq!(r["census"]["zaslavsky_ok"], true);
    assert_eq!(r["euler_characteristic"], 2);
    assert_eq!(r["h2"], 3);
    assert_eq!(r["consistent"], true);
}

#[test]
fn h1_on_generic_triangle_and_float_mode() {
    let r = json(&twbetti(&["h1", path(&data("generic3.json"))]));
    assert_eq!(r["h1"], 0);
    assert_eq!(r["census"]["resonant"].as_array().unwrap().len(), 0);
    let f = twbetti(&["h1", "--float", path(&data("float_a3.json"))]);
    assert_eq!(f.status.code(), Some(0));
    let f = json(&f);
    assert_eq!(f["mode"], "float");
    assert_eq!(f["h1"], 1);
}

#[test]
fn reports_are_byte_identical_and_seeded() {
    let a3 = data("a3.json");
    let first = twbetti(&["h1", "--seed", "5", path(&a3)]);
    let second = twbetti(&["h1", "--seed", "5", path(&a3)]);
    assert_eq!(first.stdout, second.stdout);
    let other = twbetti(&["h1", "--seed", "9", path(&a3)]);
    assert_ne!(first.stdout, other.stdout);
    assert_eq!(json(&other)["h1"], 1);
    let env = Command::new(env!("CARGO_BIN_EXE_twbetti"))
        .args(["h1", "--seed", "9", path(&a3)])
        .env("ARR_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(env.stdout, first.stdout);
}

#[test]
fn no_oracle_flag() {
    let r = json(&twbetti(&["h1", "--no-oracle", path(&data("a3.json"))]));
    assert!(r["oracle"].is_null());
    assert_eq!(r["h1"], 1);
}

#[test]
fn bounds_reports() {
    let a3 = json(&twbetti(&["bounds", path(&data("a3.json"))]));
    assert_eq!(a3["best_r0"], 1);
    for l in a3["lines"].as_array().unwrap() {
        assert_eq!(l["certificate"]["holds"], true);
    }
    let generic = json(&twbetti(&["bounds", path(&data("generic3.json"))]));
    for l in generic["lines"].as_array().unwrap() {
        assert_eq!(l["cdo"], 0);
        assert_eq!(l["r0"], 0);
    }
    let pencil = twbetti(&["bounds", path(&data("pencil4.json"))]);
    assert_eq!(pencil.status.code(), Some(0));
    let pencil = json(&pencil);
    assert_eq!(pencil["best_r0"], "not applicable");
    assert!(pencil["lines"].as_array().unwrap().iter().all(|l| l["r0"] == "not applicable"));
}

#[test]
fn sharp_pairs_oracle_and_validate() {
    let a3 = data("a3.json");
    let sp = json(&twbetti(&["sharp-pairs", path(&a3)]));
    assert_eq!(sp["pairs"].as_array().unwrap().len(), 12);
    assert_eq!(sp["at_most_one"]["satisfied"], true);
    let or = json(&twbetti(&["oracle", path(&a3)]));
    assert_eq!(or["agrees"], true);
    assert_eq!(or["oracle"].as_array().unwrap().len(), 6);
    let one = json(&twbetti(&["oracle", "--line", "2", path(&a3)]));
    assert_eq!(one["oracle"].as_array().unwrap().len(), 1);
    let v = twbetti(&["validate", path(&a3)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["valid"], true);
}

#[test]
fn exit_codes() {
    let bad = twbetti(&["h1", path(&data("bad_rational.json"))]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("lines[1][0]"));
    assert!(bad.stdout.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let inadmissible = dir.path().join("inadmissible.json");
    std::fs::write(
        &inadmissible,
        r#"{"lines": [[1, 0, 0], [0, 1, 0], [1, 1, -1]], "local_system": {"order": 3, "exponents": [0, 1, 1]}}"#,
    )
    .unwrap();
    assert_eq!(twbetti(&["h1", inadmissible.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(twbetti(&["validate", inadmissible.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(twbetti(&["h1", "/no/such/file.json"]).status.code(), Some(1));
    assert_eq!(twbetti(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(twbetti(&["--help"]).status.code(), Some(0));
}

#[test]
fn render_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a3.svg");
    let r = twbetti(&["render", path(&data("a3.json")), "-o", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<line ").count(), 6);
    assert_eq!(svg.matches("<circle ").count(), 7);
    assert_eq!(svg.matches(r#"class="resonant""#).count(), 4);
    assert!(svg.contains("sharp pairs:"));

    let again = dir.path().join("again.svg");
    twbetti(&["render", path(&data("a3.json")), "-o", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&again).unwrap(), svg.as_bytes());

    let two = dir.path().join("two.svg");
    twbetti(&["render", path(&data("two_lines.json")), "-o", two.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&two).unwrap().matches("<circle ").count(), 1);

    let unwritable = dir.path().join("missing").join("x.svg");
    let r = twbetti(&["render", path(&data("a3.json")), "-o", unwritable.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn fuzz_zero_trials() {
    let dir = tempfile::tempdir().unwrap();
    let out = twbetti(&["fuzz", "--trials", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let s = json(&out);
    assert_eq!(s["completed"], 0);
    assert_eq!(s["violations"], 0);
    assert!(s["h1_histogram"].as_object().unwrap().is_empty());
}

#[test]
fn fuzz_general_has_no_violations() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fuzz", "--trials", "20", "--lines", "6", "--order", "3", "--out", dir.path().to_str().unwrap()];
    let out = twbetti(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let s = json(&out);
    assert_eq!(s["violations"], 0);
    assert_eq!(s["completed"].as_u64().unwrap() + s["skipped"].as_u64().unwrap(), 20);
    assert_eq!(out.stdout, twbetti(&args).stdout);
}

#[test]
fn fuzz_sharp_even_order_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let out = twbetti(&[
        "fuzz", "--sharp-only", "--order", "2", "--lines", "6", "--trials", "15", "--out", dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s = json(&out);
    let hist = s["h1_histogram"].as_object().unwrap();
    assert_eq!(hist.keys().collect::<Vec<_>>(), vec!["0"]);
    assert_eq!(s["vanishing_checked"], s["completed"]);
}

#[test]
fn fuzz_rejects_too_many_lines() {
    assert_eq!(twbetti(&["fuzz", "--lines", "11"]).status.code(), Some(1));
    assert_eq!(twbetti(&["fuzz", "--lines", "2"]).status.code(), Some(1));
}
