use std::process::{Command, Output};

use hstring::certify::{revalidate, Certificate};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hstring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn alpha_exit_codes() {
    let o = run(&["alpha", "--group", "z2", "-k", "2", "-a", "x1*x2^[2]"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "x^[3]");

    let o = run(&["alpha", "--group", "z2", "-k", "2", "-a", "x1*x2^[3]"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "0");

    let o = run(&["alpha", "--group", "t^1", "-k", "3", "-a", "x1*x2*x3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not computed"));

    let o = run(&["alpha", "--group", "d3", "-k", "1", "-a", "x1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn alpha_json_and_input_file() {
    let o = run(&["--json", "alpha", "--group", "t^1", "-k", "2", "-a", "x1*x2^[2]"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["group"], "t^1");
    assert_eq!(v["terms"], serde_json::json!([[{"y": 3}]]));

    let path = std::env::temp_dir().join(format!("hstring-cli-{}.json", std::process::id()));
    let input = serde_json::json!({
        "group": "su2",
        "k": 1,
        "a": {"generators": [{"name": "x1", "degree": 1}], "terms": [{"x1": 5}]},
        "b": {"group": "su2", "terms": [[{"u": 1}]]}
    });
    std::fs::write(&path, input.to_string()).unwrap();
    let o = run(&["alpha", "--in", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "u3");
}

#[test]
fn phi_and_compose() {
    let o = run(&["phi", "--group", "z2", "-n", "2", "-a", "E(1)", "-b", "x^[4]"]);
    assert_eq!(stdout(&o).trim(), "x^[5]");
    let o = run(&["phi", "--group", "z2", "-n", "3", "-a", "[1]*E(1)"]);
    assert_eq!(code(&o), 1);
    let o = run(&["phi", "--group", "z2", "-n", "4", "-a", "o(2,5)"]);
    assert_eq!(stdout(&o).trim(), "x^[7]");
    let o = run(&["compose", "--group", "z2", "--factor", "2:E(1)", "--factor", "2:E(2)"]);
    assert_eq!(stdout(&o).trim(), "x^[3]");
}

#[test]
fn acount_and_witness() {
    let o = run(&["acount", "--rows", "3,3", "--cols", "3,3", "--exact"]);
    assert_eq!(stdout(&o).trim(), "2");
    let o = run(&["acount", "--rows", "3,3", "--cols", "3,3"]);
    assert_eq!(code(&o), 1);

    let o = run(&["--json", "witness", "--group", "su2", "-k", "1", "-a", "x1^[9]"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "found");
    let o = run(&["witness", "--group", "su2", "-k", "1", "-a", "x1^[7]"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn certify_and_family() {
    let o = run(&["--json", "certify", "--target", "AutTwisted", "--group", "z2", "--factor", "2:E(3)"]);
    assert_eq!(code(&o), 0);
    let c: Certificate = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((c.n, c.degree), (1, 2));
    revalidate(&c).unwrap();

    let o = run(&["certify", "--target", "AffF2", "--group", "t^1", "--factor", "2:E(1)"]);
    assert_eq!(code(&o), 2);

    let o = run(&["--json", "family", "--u", "1,2", "--f", "1,2"]);
    let certs: Vec<Certificate> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(certs.len(), 7);
    for c in &certs {
        assert_eq!(c.version, "v1");
        assert_eq!(c.n, 2);
        revalidate(c).unwrap();
    }
    let o = run(&["family", "--u", "1,3", "--f", "1,1"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn stable_image_and_checks() {
    let o = run(&["--json", "stable-image", "--factor", "2:E(1)", "--factor", "2:E(2)", "-k", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["offset"], 4);
    assert_eq!(v["weight"], 4);

    let o = run(&["--json", "t3-verify", "--n1", "2", "--n2", "1"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["boundary_identity"], true);

    let o = run(&["--json", "oracle-check"]);
    assert_eq!(code(&o), 0);
    for line in stdout(&o).lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["pass"], true, "{line}");
        assert!(v.get("check").is_some() && v.get("params").is_some());
    }
}
