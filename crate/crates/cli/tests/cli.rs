use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ncparam")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out) = run(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn analyze_prints_topology() {
    let (code, out) = run(&["analyze", &fixture("bubble.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("n=2 L=2 F=2 g=0 B=1"), "{out}");
    let (_, out) = run(&["analyze", &fixture("broken_bubble.json")]);
    assert!(out.contains("n=2 L=2 F=2 g=0 B=2"), "{out}");
}

#[test]
fn malformed_slot_is_an_input_error() {
    let dir = std::env::temp_dir().join(format!("ncparam-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"bad","root":"V0","vertices":{"V0":[{"line":1,"end":"head"},{"line":1,"end":"head"},{"ext":"x1"},{"ext":"x2"}]}}"#,
    )
    .unwrap();
    let (code, _) = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    let (code, _) = run(&["hu", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn hu_json_schema() {
    let v = json(&["hu", &fixture("sunshine.json"), "--json"]);
    assert!(v["hu"].is_string());
    let t = &v["topology"];
    for (k, want) in [("n", 2), ("L", 3), ("F", 3), ("g", 0), ("B", 1)] {
        assert_eq!(t[k], want, "{k}");
    }
    for term in v["terms"].as_array().unwrap() {
        assert!(term["I"].is_array() && term["kI"].is_i64() && term["nI"].is_string());
    }
}

#[test]
fn leading_json_schema() {
    let v = json(&["leading", &fixture("eye.json"), "--json"]);
    let rows = v["leading"].as_array().unwrap();
    assert!(!rows.is_empty());
    for r in rows {
        for k in ["J0", "I", "genus_pairs"] {
            assert!(r[k].is_array(), "{k}");
        }
        for k in ["nI", "reduced", "filk", "closedForm"] {
            assert!(r[k].is_string(), "{k}");
        }
        assert_eq!(r["sPower"], 6);
    }
    assert!(rows.iter().any(|r| r["J0"] == serde_json::json!([3, 4, 6])));
}

#[test]
fn leading_text_shows_factored_closed_form() {
    let (code, out) = run(&["leading", &fixture("eye.json")]);
    assert_eq!(code, 0);
    let row = out.lines().find(|l| l.contains("J0={3,4,6}")).unwrap();
    assert!(row.contains("8(W+1)(W-1)^2"), "{row}");
}

#[test]
fn hv_json_coefficients_are_polynomials() {
    let v = json(&["hv", &fixture("broken_bubble.json"), "--json"]);
    let c = v["coefficients"].as_object().unwrap();
    assert!(c.values().all(Value::is_string));
    assert_ne!(c["x3*x3"], "0");
}

#[test]
fn verify_json_reports_every_check() {
    let v = json(&["verify", &fixture("nonplanar_sunshine.json"), "--json", "--samples", "5"]);
    assert_eq!(v["passed"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["check"].as_str().unwrap()).collect();
    for want in ["hu-oracle", "hv-oracle", "leading-closed-form", "filk-preserves-pfaffian", "positivity", "expected-hu"] {
        assert!(names.contains(&want), "{want}");
    }
}

#[test]
fn omega_outside_the_unit_interval_is_rejected() {
    let (code, _) = run(&["verify", &fixture("bubble.json"), "--omega", "3/2"]);
    assert_eq!(code, 2);
}
