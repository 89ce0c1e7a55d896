use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn primend(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primend")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = primend(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn code(args: &[&str]) -> i32 {
    primend(args).status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn rotnum_quarter_rotation_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &json!({"degree": 1, "breakpoints": [[0, "1/4"]]}));
    let r = report(&["rotnum", "--map", s(&m), "--tol", "1e-6"]);
    assert_eq!(r["results"]["value"], json!(0.25));
    assert_eq!(r["results"]["exact"], json!("1/4"));
    assert_eq!(r["thresholds"]["tol"], json!(1e-6));
}

#[test]
fn rotnum_reversal_lists_fixed_points() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &json!({"degree": -1, "breakpoints": [[0, 0]]}));
    let r = report(&["rotnum", "--map", s(&m)]);
    assert_eq!(r["results"]["value"], json!(0));
    assert_eq!(r["results"]["orientation"], json!("reversing"));
    assert_eq!(r["results"]["fixed_points"], json!([0, 0.5]));
}

#[test]
fn seeded_map_matches_committed_oracle() {
    let oracle: Value = serde_json::from_str(include_str!("data/seeded_map_42.json")).unwrap();
    let r = report(&["rotnum", "--random", "8", "--seed", "42", "--tol", "1e-4"]);
    assert_eq!(r["results"]["map"], oracle["map"]);
    let value = r["results"]["value"].as_f64().unwrap();
    let expected = oracle["orbit_average"].as_f64().unwrap();
    let gap = (value - expected).rem_euclid(1.0);
    assert!(gap.min(1.0 - gap) <= 1e-4, "{value} vs {expected}");
}

#[test]
fn rotnum_interval_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &json!({"degree": 1, "breakpoints": [[0, "1/3"]]}));
    let r = report(&["rotnum", "--map", s(&m), "--n", "3"]);
    assert_eq!(r["results"]["lo"], json!(0));
    assert!((r["results"]["hi"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-11);
    assert_eq!(r["thresholds"]["n"], json!(3));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(code(&["rotnum", "--map", s(&bad)]), 2);
    let m = write(dir.path(), "m.json", &json!({"degree": 1, "breakpoints": [[0, "1/4"]]}));
    assert_eq!(code(&["rotnum", "--map", s(&m), "--tol", "1e-9"]), 3);
    assert_eq!(code(&["rot-lc", "--fixture", "square", "--rotate", "0.25", "--center", "0.5,0.5"]), 4);
    assert_eq!(code(&["rot", "--fixture", "pinwheel:4", "--variant", "product", "--ends", "swaps"]), 2);
    assert_eq!(code(&["domain", "analyze", "--fixture", "hexagon"]), 2);
}

#[test]
fn analyze_square_warns() {
    let out = primend(&["domain", "analyze", "--fixture", "square"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("simple closed curve: Rot undefined"));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["results"]["walk_length"], json!(4));
    assert_eq!(r["results"]["b_runs"], json!([]));
}

#[test]
fn analyze_slit_domains() {
    let r = report(&["domain", "analyze", "--fixture", "one-slit"]);
    assert_eq!(r["results"]["b_hat"].as_array().unwrap().len(), 3);
    assert_eq!(r["results"]["multiplicity"]["1"], json!(2));
    assert_eq!(r["results"]["multiplicity"]["6"], json!(1));
    let r = report(&["domain", "analyze", "--fixture", "pinwheel:4"]);
    assert_eq!(r["results"]["b_hat"].as_array().unwrap().len(), 12);
}

#[test]
fn analyze_rejects_crossing_slit() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(
        dir.path(),
        "d.json",
        &json!({
            "outer": [[0, 0], [1, 0], [1, 1], [0, 1]],
            "slits": [{"attach_index": 0, "points": [[2, 0.5]]}],
        }),
    );
    let out = primend(&["domain", "analyze", "--domain", s(&d)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("slit_crossing"));
}

#[test]
fn analyze_grid_clusters() {
    let r = report(&["domain", "analyze", "--fixture", "comb:5:32"]);
    assert_eq!(r["results"]["kind"], json!("grid"));
    assert_eq!(r["results"]["clusters"].as_array().unwrap().len(), 10);
    assert_eq!(r["thresholds"]["scale"], json!(0.0625));
}

#[test]
fn rot_dispatches_by_input() {
    let r = report(&["rot", "--fixture", "pinwheel:4", "--rotate", "0.25", "--ends", "fixes"]);
    assert_eq!(r["results"]["pipeline"], json!("locally_connected"));
    assert_eq!(r["results"]["exact"], json!("1/4"));
    let r = report(&["rot", "--fixture", "comb:5:32", "--shift", "2"]);
    assert_eq!(r["results"]["pipeline"], json!("arc_family"));
    assert_eq!(r["results"]["exact"], json!("1/5"));
    assert_eq!(r["results"]["family_size"], json!(10));
}

#[test]
fn two_member_swap_uses_edge_rule() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        &json!({"arcs": [
            {"kind": "point", "a": "0", "label": "J1"},
            {"kind": "point", "a": "1/2", "label": "J2"},
        ]}),
    );
    let b = write(dir.path(), "b.json", &json!({"J1": "J2", "J2": "J1"}));
    let args = ["rot-cyl", "--family", s(&f), "--bijection", s(&b), "--variant", "product", "--ends", "fixes"];
    let r = report(&args);
    assert_eq!(r["results"]["exact"], json!("1/2"));
    assert_eq!(r["results"]["path"], json!("edge_rule"));
    let r = report(&["rot", "--family", s(&f), "--bijection", s(&b), "--variant", "end-flip"]);
    assert_eq!(r["results"]["ends"], json!("swaps"));
    assert_eq!(r["results"]["orientation"], json!("reversing"));
    assert_eq!(r["results"]["exact"], json!("1/2"));
    let flip_and_mirror = ["rot", "--family", s(&f), "--bijection", s(&b), "--variant", "end-flip", "--orientation", "reversing"];
    let r = report(&flip_and_mirror);
    assert_eq!(r["results"]["orientation"], json!("preserving"));
    assert_eq!(r["results"]["exact"], json!("0"));
}

#[test]
fn order_check_examples() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "f.json",
        &json!({"arcs": (0..4).map(|i| json!({"kind": "point", "a": format!("{i}/4"), "label": format!("J{}", i + 1)})).collect::<Vec<_>>()}),
    );
    let shift = write(dir.path(), "s.json", &json!({"J1": "J2", "J2": "J3", "J3": "J4", "J4": "J1"}));
    let swap = write(dir.path(), "t.json", &json!({"J1": "J2", "J2": "J1", "J3": "J3", "J4": "J4"}));
    let r = report(&["order-check", "--family", s(&f), "--bijection", s(&shift), "--rot"]);
    assert_eq!(r["results"]["order_preserving"], json!(true));
    assert_eq!(r["results"]["exact"], json!("1/4"));
    let r = report(&["order-check", "--family", s(&f), "--bijection", s(&swap)]);
    assert_eq!(r["results"]["order_preserving"], json!(false));
}

#[test]
fn demo_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("osc.csv");
    let r = report(&["--out", s(&csv), "demo", "square", "--resolutions", "32,64", "--window", "4"]);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "resolution,window_plane_units,oscillation");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("32,0.125,"));
    assert_eq!(r["results"]["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_canonical_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", &json!({"degree": 1, "breakpoints": [[0, 0.1], [0.25, 0.6], [0.5, 0.75], [0.75, 0.9]]}));
    let runs: Vec<Vec<&str>> = vec![
        vec!["rotnum", "--map", s(&m), "--n", "5000"],
        vec!["rotnum", "--random", "6", "--seed", "9"],
        vec!["domain", "analyze", "--fixture", "t-slit"],
        vec!["rot", "--fixture", "two-slit", "--rotate", "0.5"],
        vec!["rot", "--fixture", "comb:3:32", "--shift", "1"],
        vec!["demo", "warsaw", "--resolutions", "32"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let first = primend(args);
        let second = primend(args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?} is not deterministic");
        let text = String::from_utf8(first.stdout).unwrap();
        let parsed: Value = serde_json::from_str(&text).unwrap();
        let keys: Vec<&String> = parsed.as_object().unwrap().keys().collect();
        assert!(text.starts_with(&format!("{{\"{}\":", keys[0])));
        let path = dir.path().join(format!("report{i}.json"));
        std::fs::write(&path, &text).unwrap();
        let replay = report(&["replay", s(&path)]);
        assert_eq!(replay["results"].to_string(), parsed["results"].to_string(), "{args:?}");
        assert_eq!(replay["input_digests"], parsed["input_digests"]);
    }
}
