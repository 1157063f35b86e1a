use std::path::Path;
use std::process::{Command, Output};

use matchlab_core::parse_instance;

const T1: &str = "bipartite 2 2 3\n0 0 3.0\n0 1 2.9\n1 0 2.8\n";

fn matchlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_matchlab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_t1(dir: &Path) -> String {
    let path = dir.join("t1.graph");
    std::fs::write(&path, T1).unwrap();
    path.to_str().unwrap().to_string()
}

fn field(row: &str, name: &str) -> f64 {
    let header: Vec<&str> = "model,arrival,algorithm,p,mode,trials,seed,e_alg,benchmark,ratio,std_error,instance_id"
        .split(',')
        .collect();
    let pos = header.iter().position(|h| *h == name).unwrap();
    row.split(',').nth(pos).unwrap().parse().unwrap()
}

#[test]
fn curve_prints_single_value() {
    let out = matchlab(&[
        "curve",
        "--model",
        "random-order",
        "--arrival",
        "vertex",
        "--p",
        "0.4142",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let (p, value) = text.trim().split_once(',').unwrap();
    assert_eq!(p, "0.4142");
    assert!((value.parse::<f64>().unwrap() - 0.17157).abs() < 1e-5);
}

#[test]
fn curve_sweep() {
    let out = matchlab(&["curve", "--model", "aosp", "--arrival", "edge", "--steps", "4"]);
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn exact_aosp_on_t1() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = write_t1(dir.path());
    let out = matchlab(&[
        "exact",
        "--instance",
        &t1,
        "--model",
        "aosp",
        "--arrival",
        "vertex",
        "--p",
        "0.5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("model,arrival"));
    assert!((field(rows[1], "ratio") - 1.45 / 2.875).abs() < 1e-9);
}

#[test]
fn one_row_per_p_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = write_t1(dir.path());
    let csv = dir.path().join("rows.csv");
    let out = matchlab(&[
        "simulate",
        "--instance",
        &t1,
        "--model",
        "random-order",
        "--arrival",
        "vertex",
        "--p",
        "0.25",
        "0.5",
        "0.75",
        "--trials",
        "500",
        "--seed",
        "9",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 4);
    let again = dir.path().join("again.csv");
    matchlab(&[
        "simulate",
        "--instance",
        &t1,
        "--model",
        "random-order",
        "--arrival",
        "vertex",
        "--p",
        "0.25",
        "0.5",
        "0.75",
        "--trials",
        "500",
        "--seed",
        "9",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read_to_string(&again).unwrap(), text);
}

#[test]
fn generate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.graph");
    let out = matchlab(&[
        "generate",
        "tight-vertex",
        "k=1",
        "p=0.5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let inst = parse_instance(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(inst.sides().unwrap(), (3, 3));
    assert!(inst.opt_certificate().is_some());
}

#[test]
fn two_faced_with_second_face() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = write_t1(dir.path());
    let faces = dir.path().join("faces.graph");
    std::fs::write(&faces, "bipartite 2 2 3\n0 0 0.5\n0 1 4.0\n1 0 1.5\n").unwrap();
    let out = matchlab(&[
        "exact",
        "--instance",
        &t1,
        "--faces",
        faces.to_str().unwrap(),
        "--model",
        "two-faced",
        "--arrival",
        "vertex",
        "--p",
        "0.4142",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    assert!(field(&row, "ratio") >= 3.0 - 2.0 * 2f64.sqrt());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(matchlab(&["exact", "--model", "aosp"]).status.code(), Some(2));
    assert_eq!(
        matchlab(&["curve", "--model", "nope", "--arrival", "vertex", "--p", "0.5"])
            .status
            .code(),
        Some(2)
    );
    let out = matchlab(&[
        "exact",
        "--gen",
        "tight-vertex k=10 p=0.3",
        "--model",
        "random-order",
        "--arrival",
        "vertex",
        "--p",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "bipartite 1 1 1\n0 0 -1\n").unwrap();
    let out = matchlab(&[
        "exact",
        "--instance",
        bad.to_str().unwrap(),
        "--model",
        "aosp",
        "--arrival",
        "vertex",
        "--p",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let missing = dir.path().join("missing.graph");
    let out = matchlab(&[
        "exact",
        "--instance",
        missing.to_str().unwrap(),
        "--model",
        "aosp",
        "--arrival",
        "vertex",
        "--p",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let out = matchlab(&[
        "exact",
        "--gen",
        "single-edge",
        "--model",
        "aosp",
        "--arrival",
        "vertex",
        "--p",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
