use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tangle(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "tangles", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtangle"))
        .args(args)
        .env_remove("QTANGLE_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = run(&full);
    (
        code(&o),
        serde_json::from_slice(&o.stdout).expect("stdout is JSON"),
    )
}

fn temp_tangle(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("qtangle-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn eval_unknot_is_minus_two() {
    let (c, v) = json(&["eval", &tangle("unknot.tangle")]);
    assert_eq!(c, 0);
    assert_eq!(v["gamma"], 0);
    assert_eq!(v["value"]["min_deg"], -1);
    assert_eq!(v["value"]["coeffs"], serde_json::json!(["-1", "0", "-1"]));
    assert!(v["value"]["valid_to"].is_null());
}

#[test]
fn eval_text_output() {
    let o = run(&["eval", &tangle("trefoil.tangle")]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("γ = 3"), "{text}");
    assert!(text.contains("-q^1 - q^3 - q^5 + q^9"), "{text}");
}

#[test]
fn modes_agree_on_the_hopf_link() {
    let (_, g) = json(&["eval", &tangle("hopf.tangle"), "--mode", "global"]);
    let (_, s) = json(&["eval", &tangle("hopf.tangle"), "--mode", "sliced"]);
    assert_eq!(g["value"], s["value"]);
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qtangle"))
        .args(["--json", "eval", &tangle("unknot-v2.tangle")])
        .env("QTANGLE_PRECISION", "12")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["precision"]["requested"], 12);
}

#[test]
fn exit_codes() {
    let bad = temp_tangle("parse", "bottom\ncup 1 1 x\n");
    assert_eq!(code(&run(&["eval", &bad])), 2);
    let invalid = temp_tangle("validate", "bottom +1 +1\ncap 1\n");
    assert_eq!(code(&run(&["eval", &invalid])), 3);
    assert_eq!(code(&run(&["eval", "--bogus"])), 64);
    assert_eq!(
        code(&run(&[
            "--precision",
            "4",
            "eval",
            &tangle("unknot.tangle")
        ])),
        64
    );
    assert_eq!(code(&run(&["eval", "/nonexistent/file.tangle"])), 64);
    assert_eq!(code(&run(&["verify", "invariance", "--moves", "zz"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn verification_failure_exits_one_with_reproduction() {
    let o = run(&[
        "verify",
        "invariance",
        "--moves",
        "r1",
        "--trials",
        "3",
        "--flipped-gamma",
    ]);
    assert_eq!(code(&o), 1);
    let text = String::from_utf8(o.stdout).unwrap();
    let line = text
        .lines()
        .find(|l| l.starts_with("FAIL"))
        .expect("a failing trial");
    let repro = line
        .split("reproduce: qtangle ")
        .nth(1)
        .unwrap()
        .trim_end_matches(')');
    let args: Vec<&str> = repro.split_whitespace().collect();
    let again = run(&args);
    assert_eq!(code(&again), 1);
    assert!(String::from_utf8(again.stdout).unwrap().contains("FAIL"));
}

#[test]
fn invariance_is_deterministic() {
    let args = [
        "--seed",
        "9",
        "verify",
        "invariance",
        "--moves",
        "r2,r3",
        "--trials",
        "6",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn projector_checks_pass() {
    let (c, v) = json(&["verify", "jones-wenzl", "--n", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["ok"], true);
    assert_eq!(code(&run(&["verify", "slides", "--n", "1"])), 0);
}

#[test]
fn grassmannian_dims() {
    let (c, v) = json(&[
        "grassmann",
        "--k",
        "1",
        "--n",
        "3",
        "--check-complex",
        "--hbound",
        "-3",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["graded_dims"], serde_json::json!([1, 1, 1]));
}

#[test]
fn unknot_homology_ext_table() {
    let (c, v) = json(&["unknot-homology", "--hmax", "6"]);
    assert_eq!(c, 0);
    assert_eq!(v["ext"]["-2"], serde_json::json!([[-4, 1], [-2, 1]]));
    assert_eq!(v["ext"]["-6"], serde_json::json!([[-12, 1]]));
    assert_eq!(v["ext"]["-3"], serde_json::json!([]));
}

#[test]
fn listed_gl3_complex_fails() {
    let (c, v) = json(&["quiver-check", "--which", "gl3"]);
    assert_eq!(c, 1);
    assert_eq!(v["gl3"]["repaired_p12"]["squares_to_zero"], true);
    let (c, _) = json(&["quiver-check", "--which", "gl2"]);
    assert_eq!(c, 0);
}

#[test]
fn gor_dictionary() {
    let (c, v) = json(&["gor", "--hbound", "-4", "--qbound", "12"]);
    assert_eq!(c, 0);
    assert_eq!(v["dictionaries"][0]["t"], serde_json::json!([-1, -1, 2]));
}
