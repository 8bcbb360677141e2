//! End-to-end runs of the `steiner` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn steiner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steiner")).args(args).output().unwrap()
}

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("steiner-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn solves_the_square() {
    let out = steiner(&["solve", &instance("square.pts")]);
    assert!(out.status.success());
    let v = json(&out);
    let len = v["result"]["length"].to_string().parse::<f64>().unwrap();
    assert!((len - (1.0 + 3f64.sqrt())).abs() < 1e-12);
    assert_eq!(v["result"]["steiner_points"], 2);
    assert_eq!(v["status"], "PASS");
}

#[test]
fn two_points_draw_one_segment() {
    let file = scratch("pair.pts", "2 2\n0 0\n1 0\n");
    let svg = file.replace(".pts", ".svg");
    let out = steiner(&["solve", &file, "--svg", &svg]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<line").count(), 1);
}

#[test]
fn malformed_input_exits_2() {
    let file = scratch("bad.pts", "2 3\n0 0\n1 x\n");
    let out = steiner(&["solve", &file]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn analyze_rectangle_passes() {
    let out = steiner(&["analyze", &instance("rectangle.pts"), "--center", "0,0", "--s", "1", "--rho", "0.9"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["status"], "PASS");
}

#[test]
fn analyze_rejects_terminal_in_ball() {
    let out = steiner(&["analyze", &instance("rectangle.pts"), "--center", "0.86,0.5", "--s", "0.2", "--rho", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn pathology_limits() {
    let out = steiner(&["pathology", "--stages", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["status"], "PASS");
    assert_eq!(steiner(&["pathology", "--stages", "13"]).status.code(), Some(4));
}

#[test]
fn sphere_connect_needs_three_dimensions() {
    assert_eq!(steiner(&["sphere-connect", "--d", "2", "--t", "1"]).status.code(), Some(4));
}

#[test]
fn generators_are_reproducible() {
    let a = steiner(&["generate", "random-ball", "--d", "3", "--n", "5", "--seed", "9"]);
    let b = steiner(&["generate", "random-ball", "--d", "3", "--n", "5", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let cube = String::from_utf8(steiner(&["generate", "hypercube", "--d", "3"]).stdout).unwrap();
    assert!(cube.lines().any(|l| l.trim() == "3 8"));
    let circ = steiner(&["generate", "cocircular", "--n", "6", "--r", "1", "--seed", "1"]);
    assert!(circ.status.success());
}
