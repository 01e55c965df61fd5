use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn rees(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rees")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--emit", "json"]);
    let o = rees(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

#[test]
fn quaternary_cubics_report() {
    let v = json(&["analyze", "quaternary-cubics", "--samuel-max", "0"]);
    assert_eq!(v["fiber"]["edeg"], 9);
    assert_eq!(v["fiber"]["birational"], false);
    assert_eq!(v["rees"]["r_min"], 6);
    assert_eq!(v["hilbert"]["quotient"], serde_json::json!([1, 4, 10, 15, 15, 7, 1]));
    assert_eq!(v["hilbert"]["colon"], serde_json::json!([1, 4, 9, 9, 4, 1]));
    assert_eq!(v["hilbert"]["content"], serde_json::json!([1, 4, 7]));
}

#[test]
fn quaternary_quadrics_report() {
    let v = json(&["analyze", "quaternary-quadrics", "--samuel-max", "0"]);
    let nu = &v["rees"]["nu"];
    assert_eq!(nu[0], serde_json::json!([1, 15]));
    assert_eq!(nu[1], serde_json::json!([2, 4]));
    assert_eq!(v["matrix"]["det_degree"], 8);
    assert_eq!(v["matrix"]["det"], v["fiber"]["equation"]);
    assert_eq!(v["fiber"]["birational"], true);
}

#[test]
fn reports_are_deterministic_and_agree() {
    let path = fixtures_dir().join("ternary-monomial-cubics.toml");
    let path = path.to_str().unwrap();
    let a = rees(&["analyze", path]);
    let b = rees(&["analyze", path]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&["analyze", path]);
    let text = stdout(&a);
    assert!(text.contains(&format!("equation: {}", v["fiber"]["equation"].as_str().unwrap())));
    assert!(text.contains("r_min: 4"));
    assert_eq!(v["matrix"]["exponent"], 3);
}

#[test]
fn subcommands_select_sections() {
    let v = json(&["fiber", "ternary-quadrics-degenerate"]);
    assert!(v.get("fiber").is_some());
    assert!(v.get("rees").is_none() && v.get("matrix").is_none());
    assert_eq!(v["fiber"]["equation"], "T1*T2 - T4^2");
    let v = json(&["matrix", "ternary-quadrics-degenerate"]);
    assert_eq!(v["matrix"]["det"], "T1^2*T2^2 - 2*T1*T2*T4^2 + T4^4");
    let v = json(&["binary", "binary"]);
    assert_eq!(v["binary"]["r"], 2);
    assert_eq!(v["matrix"]["det_degree"], 6);
}

#[test]
fn field_override_keeps_the_numbers() {
    let q = json(&["hilbert", "ternary-quadrics"]);
    let p = json(&["hilbert", "ternary-quadrics", "--field", "GF(32003)"]);
    assert_eq!(p["field"], "GF(32003)");
    assert_eq!(q["hilbert"], p["hilbert"]);
    let lex = json(&["rees", "ternary-quadrics", "--order", "lex"]);
    let grevlex = json(&["rees", "ternary-quadrics"]);
    assert_eq!(lex["rees"]["nu"], grevlex["rees"]["nu"]);
}

#[test]
fn input_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "name = \"bad\"\nvariables = [\"x\", \"y\"]\ngenerators = [\"x^2 +\", \"y^2\", \"x*y\"]\n").unwrap();
    let o = rees(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generator 1"));
    assert_eq!(rees(&["analyze", "no-such-file.toml"]).status.code(), Some(2));
    assert_eq!(rees(&["binary", "ternary-quadrics"]).status.code(), Some(2));
    assert_eq!(rees(&["analyze", "binary", "--caps", "10"]).status.code(), Some(2));
    assert_eq!(rees(&["analyze", "binary", "--field", "GF(4)"]).status.code(), Some(2));
}

#[test]
fn verify_filter_keeps_binary_criteria() {
    let o = rees(&["verify-paper", "--filter", "binary"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    let ids: Vec<&str> = out.lines().map(|l| l.split_whitespace().nth(1).unwrap()).collect();
    assert_eq!(ids, ["3", "4", "8", "9"]);
    assert!(out.lines().all(|l| l.contains("[pass]")));
}

#[test]
fn verify_flags_a_perturbed_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["ternary-quadrics", "ternary-quadrics-degenerate"] {
        let text = std::fs::read_to_string(fixtures_dir().join(format!("{name}.toml"))).unwrap();
        let text = if name == "ternary-quadrics" { text.replace("power = 1", "power = 2") } else { text };
        std::fs::write(dir.path().join(format!("{name}.toml")), text).unwrap();
    }
    let o = rees(&["verify-paper", "--corpus", dir.path().to_str().unwrap(), "--emit", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let c5 = v.as_array().unwrap().iter().find(|c| c["id"] == 5).unwrap();
    assert_eq!(c5["pass"], false);
    let fixtures = c5["fixtures"].as_array().unwrap();
    assert_eq!(fixtures[0]["pass"], false);
    assert_eq!(fixtures[1]["pass"], true);
    for c in v.as_array().unwrap().iter().filter(|c| c["id"] == 8 || c["id"] == 9) {
        assert_eq!(c["pass"], true);
    }
}
