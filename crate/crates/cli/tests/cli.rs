use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use penner_core::surface::Triangulation;
use serde_json::Value;
use tempfile::TempDir;

fn penner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_penner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn ok(args: &[&str]) -> String {
    let out = penner(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn code(args: &[&str]) -> i32 {
    penner(args).status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn new_torus_has_unit_coordinates() {
    let dir = TempDir::new().unwrap();
    let ws = path(&dir, "t.json");
    ok(&["new", "--g", "1", "--s", "1", "--out", s(&ws)]);
    let v = read(&ws);
    assert_eq!(v["mode"], "rational");
    assert_eq!(v["surface"]["edges"].as_array().unwrap().len(), 3);
    assert_eq!(v["surface"]["faces"].as_array().unwrap().len(), 2);
    for e in 0..3 {
        assert_eq!(v["coords"]["f"][e.to_string()], "1/1");
    }
    assert_eq!(v["coords"]["eps"]["0"], 1);
    assert_eq!(v["coords"]["eps"]["1"], 1);
}

#[test]
fn new_pants_and_bad_surface() {
    let out = ok(&["new", "--g", "0", "--s", "3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["surface"]["edges"].as_array().unwrap().len(), 3);
    assert_eq!(v["surface"]["faces"].as_array().unwrap().len(), 2);
    assert_eq!(code(&["new", "--g", "0", "--s", "1"]), 1);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["new", "--g", "1"]), 1);
    assert_eq!(code(&["new", "--g", "1", "--s", "1", "--signs", "+x"]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn flip_twice_restores_torus() {
    let dir = TempDir::new().unwrap();
    let ws = path(&dir, "t.json");
    ok(&["new", "--g", "1", "--s", "1", "--out", s(&ws)]);
    let first = ok(&["flip", s(&ws), "0"]);
    assert_eq!(first.trim(), "flip 0: S = 2/1, sign = +");
    assert_eq!(read(&ws)["coords"]["f"]["0"], "2/1");
    ok(&["flip", s(&ws), "0"]);
    let v = read(&ws);
    for e in 0..3 {
        assert_eq!(v["coords"]["f"][e.to_string()], "1/1");
    }
    assert_eq!(v["history"].as_array().unwrap().len(), 3);
    assert!(ok(&["report", s(&ws)]).contains("replays to current state"));
}

#[test]
fn degenerate_flip_exits_with_two() {
    let tri = Triangulation::new_surface(0, 4).unwrap();
    let quad = tri.quad_of(0).unwrap();
    let mut f = vec!["1".to_string(); tri.num_edges()];
    for (side, len) in quad.sides.iter().zip(["2", "1", "3", "6"]) {
        f[*side] = len.to_string();
    }
    let signs: String = (0..tri.num_faces())
        .map(|t| if t == quad.second { '-' } else { '+' })
        .collect();
    let dir = TempDir::new().unwrap();
    let ws = path(&dir, "d.json");
    let lengths = f.join(",");
    ok(&["new", "--g", "0", "--s", "4", "--lengths", &lengths, "--signs", &signs, "--out", s(&ws)]);
    let before = std::fs::read_to_string(&ws).unwrap();
    let out = penner(&["flip", s(&ws), "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("step 0"));
    assert_eq!(std::fs::read_to_string(&ws).unwrap(), before);
}

#[test]
fn report_examples() {
    let dir = TempDir::new().unwrap();
    let ws = path(&dir, "t.json");
    ok(&["new", "--g", "1", "--s", "1", "--out", s(&ws)]);
    let report = ok(&["report", s(&ws)]);
    assert!(report.contains("phi[0] = 6/1"));
    assert!(report.contains("k = 1"));
    assert!(report.contains("holonomy[0] = (1/1, 6/1) parabolic"));

    let scaled = ok(&["scale", s(&ws), "2"]);
    assert_eq!(scaled.trim(), "phi[0] = 3/2");
    assert!(ok(&["report", s(&ws)]).contains("phi[0] = 3/2"));

    let mixed = path(&dir, "m.json");
    ok(&["new", "--g", "1", "--s", "1", "--signs", "+-", "--out", s(&mixed)]);
    let report = ok(&["report", s(&mixed)]);
    assert!(report.contains("phi[0] = 0/1"));
    assert!(report.contains("chart point: invalid"));
    assert_eq!(code(&["holonomy", s(&mixed)]), 3);
    assert_eq!(code(&["flip", s(&mixed), "0"]), 3);
}

#[test]
fn holonomy_json() {
    let dir = TempDir::new().unwrap();
    let ws = path(&dir, "p.json");
    ok(&["new", "--g", "0", "--s", "3", "--lengths", "2,6,3", "--out", s(&ws)]);
    let v: Value = serde_json::from_str(&ok(&["holonomy", s(&ws)])).unwrap();
    assert_eq!(v["rank"], 2);
    assert_eq!(v["generators"].as_array().unwrap().len(), 4);
    assert_eq!(v["connection"]["short"]["0"], "1/1");
    assert_eq!(v["punctures"].as_array().unwrap().len(), 3);
}

#[test]
fn census_rows_and_determinism() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "a.csv");
    let b = path(&dir, "b.csv");
    for out in [&a, &b] {
        ok(&["census", "--g", "1", "--s", "1", "--trials", "100", "--seed", "4", "--out", s(out)]);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    assert!(text.contains("+-,0,100,0,100"));
    assert!(text.contains("++,1,100,100,0"));
}

#[test]
fn route_to_two_flip_neighbor() {
    let dir = TempDir::new().unwrap();
    let ws = path(&dir, "s.json");
    ok(&["new", "--g", "0", "--s", "4", "--out", s(&ws)]);
    let v: Value = serde_json::from_str(&ok(&["route", s(&ws), "--via", "0,1"])).unwrap();
    assert_eq!(v["success"], true);
    assert!(v["length"].as_u64().unwrap() <= 2);

    let target = path(&dir, "target.json");
    ok(&["export", s(&ws), "--what", "surface", "--out", s(&target)]);
    let v: Value = serde_json::from_str(&ok(&["route", s(&ws), "--target", s(&target)])).unwrap();
    assert_eq!(v["length"], 0);

    ok(&["route", s(&ws), "--via", "0,1", "--apply"]);
    assert_eq!(read(&ws)["history"].as_array().unwrap().len(), 2);
}

#[test]
fn float_mode_workspace() {
    let dir = TempDir::new().unwrap();
    let ws = path(&dir, "f.json");
    ok(&["--mode", "float", "new", "--g", "1", "--s", "1", "--out", s(&ws)]);
    assert_eq!(read(&ws)["mode"], "float");
    let out = ok(&["flip", s(&ws), "1"]);
    assert!(out.contains("S = 2.0000000000000000e0"), "{out}");
}

#[test]
fn catalan_counts() {
    assert!(ok(&["catalan", "8"]).starts_with("8-gon: 132 triangulations"));
    let listed = ok(&["catalan", "5", "--list"]);
    assert_eq!(listed.lines().count(), 6);
    assert_eq!(code(&["catalan", "2"]), 1);
}

#[test]
fn import_export_round_trip() {
    let dir = TempDir::new().unwrap();
    let ws = path(&dir, "w.json");
    ok(&["new", "--g", "1", "--s", "2", "--out", s(&ws)]);
    ok(&["flip", s(&ws), "2"]);
    let surface = path(&dir, "surface.json");
    let coords = path(&dir, "coords.json");
    ok(&["export", s(&ws), "--what", "surface", "--out", s(&surface)]);
    ok(&["export", s(&ws), "--what", "coords", "--out", s(&coords)]);
    let copy = path(&dir, "copy.json");
    ok(&["import", s(&surface), "--coords", s(&coords), "--out", s(&copy)]);
    let (a, b) = (read(&ws), read(&copy));
    assert_eq!(a["surface"], b["surface"]);
    assert_eq!(a["coords"], b["coords"]);
    assert!(ok(&["report", s(&copy)]).contains("replays to current state"));
}

#[test]
fn io_errors_exit_with_four() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&["report", s(&path(&dir, "missing.json"))]), 4);
    let junk = path(&dir, "junk.json");
    std::fs::write(&junk, "{ not json").unwrap();
    assert_eq!(code(&["report", s(&junk)]), 4);
    assert_eq!(code(&["import", s(&junk)]), 4);
}
