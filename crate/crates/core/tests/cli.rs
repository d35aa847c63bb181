mod common;

use std::process::{Command, Output};

use common::fixture_path;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropcurve")).args(args).output().expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture_path(name).display().to_string()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// JSON result with the wall time removed from the manifest.
fn json_of(o: &Output) -> Value {
    let mut v: Value = serde_json::from_slice(&o.stdout).expect("json output");
    v["manifest"].as_object_mut().unwrap().remove("wall_time_seconds");
    v
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tropcurve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn prevariety_rays_and_classification() {
    let o = run(&["prevariety", &fx("eq5.pol"), "--classify", "3,1,1", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json_of(&o);
    let pre: Vec<Vec<i64>> = serde_json::from_value(v["result"]["pretropisms"].clone()).unwrap();
    assert_eq!(pre, vec![vec![1, 0, 0], vec![1, 0, 1], vec![2, 1, 1]]);
    assert_eq!(v["result"]["classification"]["membership"], "interior_of_cone");
    let cone: Vec<Vec<i64>> = serde_json::from_value(v["result"]["classification"]["cone"].clone()).unwrap();
    assert_eq!(cone, vec![vec![1, 0, 0], vec![2, 1, 1]]);
    assert_eq!(v["manifest"]["config"]["seed"], 0);
    assert_eq!(v["manifest"]["input_sha256"].as_str().unwrap().len(), 64);

    let o = run(&["prevariety", &fx("viviani.pol"), "--json"]);
    let pre: Vec<Vec<i64>> = serde_json::from_value(json_of(&o)["result"]["pretropisms"].clone()).unwrap();
    assert_eq!(pre, vec![vec![2, 1, 0]]);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["prevariety", &fx("empty.pol")])), 2);
    let bad = tmp("bad.pol");
    std::fs::write(&bad, "x1 + ;").unwrap();
    assert_eq!(code(&run(&["degree", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["prevariety", "/nonexistent/file.pol"])), 2);
    assert_eq!(code(&run(&["series", &fx("viviani.pol"), "--ray", "2,1"])), 3);
    assert_eq!(code(&run(&["series", &fx("viviani.pol"), "--ray", "2,1,0", "--pin", "x7=1"])), 3);
    let o = run(&["series", &fx("eq7n4.pol"), "--ray", "1,1,1,1"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("end game"));
    assert_eq!(code(&run(&["endgame", &fx("viviani.pol"), "--max-winding", "1"])), 5);
    assert_eq!(code(&run(&["series", &fx("viviani.pol"), "--ray", "-2,1,0"])), 1);
}

#[test]
fn series_viviani_text() {
    let o = run(&["series", &fx("viviani.pol"), "--ray", "2,1,0", "--order", "9", "--pin", "x1=2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("x2 = 2*t - t^3 - 1/4*t^5 - 1/8*t^7 - 5/64*t^9"), "{out}");
    assert_eq!(out.matches("certified yes").count(), 4);
}

#[test]
fn certify_round_trip() {
    let path = tmp("viviani.json");
    let o = run(&[
        "series",
        &fx("viviani.pol"),
        "--ray",
        "2,1,0",
        "--order",
        "9",
        "--pin",
        "x1=2",
        "--json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let o = run(&["certify", &fx("viviani.pol"), path.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 0);
    let v = json_of(&o);
    let certs = v["result"]["certifications"].as_array().unwrap();
    assert_eq!(certs.len(), 4);
    assert!(certs.iter().all(|c| c["passed"] == true));

    // a truncated copy claiming a higher order fails
    let mut series: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let e = &mut series["result"]["branches"][0]["expansion"];
    e["order"] = Value::from(12);
    let bumped = tmp("bumped.json");
    std::fs::write(&bumped, serde_json::to_string(&e).unwrap()).unwrap();
    assert_eq!(code(&run(&["certify", &fx("viviani.pol"), bumped.to_str().unwrap()])), 1);
    assert_eq!(code(&run(&["certify", &fx("eq4.pol"), &fx("eq4.pol")])), 2);
}

#[test]
fn endgame_groups() {
    let o = run(&["endgame", &fx("eq4.pol"), "--seed", "7", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json_of(&o);
    assert_eq!(v["result"]["path_count"], 4);
    let groups = v["result"]["groups"].as_array().unwrap();
    let hidden = groups.iter().find(|g| g["tropism"]["direction"] == serde_json::json!([3, 1, 1])).unwrap();
    assert_eq!(hidden["tropism"]["winding"], 3);
    assert_eq!(v["manifest"]["config"]["master_seed"], 7);

    let o = run(&["endgame", &fx("linear.pol")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("1 paths"));
}

#[test]
fn degree_and_mixed_volume() {
    let v = json_of(&run(&["degree", &fx("eq5.pol"), "--json"]));
    assert_eq!(v["result"]["degree_bound"], 4);
    assert_eq!(v["result"]["decomposition"]["total"], 4);
    let v = json_of(&run(&["mixedvol", &fx("eq7n4.pol"), "--ray", "1,1,1,1", "--json"]));
    assert_eq!(v["result"]["initial_mixed_volume"], 1);
    let v = json_of(&run(&["mixedvol", &fx("eq7n4.pol"), "--ray", "1,0,0,0", "--json"]));
    assert_eq!(v["result"]["initial_mixed_volume"], 3);
    let v = json_of(&run(&["mixedvol", &fx("viviani.pol"), "--json"]));
    assert_eq!(v["result"]["mixed_volume"], 4);
}

#[test]
fn sample_csv_with_manifest() {
    let out = tmp("viviani.csv");
    let o = run(&[
        "sample",
        &fx("viviani.pol"),
        "--ray",
        "2,1,0",
        "--pin",
        "x1=2",
        "--order",
        "9",
        "--count",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "t,x1_re,x1_im,x2_re,x2_im,x3_re,x3_im");
    assert_eq!(lines.len(), 6);
    let side = std::path::PathBuf::from(format!("{}.manifest.json", out.display()));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(m["config"]["count"], 5);
    assert_eq!(code(&run(&["sample", &fx("viviani.pol"), "--ray", "2,1,0", "--count", "1"])), 1);
}

#[test]
fn same_seed_same_bytes() {
    let cases: Vec<Vec<String>> = vec![
        vec!["prevariety".into(), fx("eq5.pol")],
        vec!["series".into(), fx("viviani.pol"), "--ray".into(), "2,1,0".into(), "--order".into(), "9".into()],
        vec!["endgame".into(), fx("eq4.pol"), "--seed".into(), "3".into()],
        vec!["degree".into(), fx("eq7n5.pol")],
    ];
    for c in cases {
        let mut args: Vec<&str> = c.iter().map(String::as_str).collect();
        args.push("--json");
        let a = serde_json::to_string(&json_of(&run(&args))).unwrap();
        let b = serde_json::to_string(&json_of(&run(&args))).unwrap();
        assert_eq!(a, b, "{args:?}");
    }
}
