use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn dmw(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dmw")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn every_witness_passes_verify() {
    let dir = TempDir::new().unwrap();
    for seed in 0..12 {
        let n = (4 + seed % 5).to_string();
        let kind = if seed % 2 == 0 { "uniform" } else { "bounded-dmw" };
        let (code, graph, _) = dmw(&["gen", "--n", &n, "--omega", "3", "--seed", &seed.to_string(), "--kind", kind]);
        assert_eq!(code, 0);
        let g = write(dir.path(), "g.txt", &graph);
        let weights = write(dir.path(), "w.txt", "0 3\n1 0\n");
        let demands = write(dir.path(), "n.txt", "0 2\n");
        let pairs = write(dir.path(), "p.txt", "0 1\n2 3\n");
        let caps = write(dir.path(), "c.txt", "0 2\n1 2\n");
        let pattern = write(dir.path(), "h.txt", "2\n0 1\n1 0\n");
        let runs: Vec<(&str, Vec<&str>)> = vec![
            ("decompose", vec![]),
            ("fvs", vec!["--weights", s(&weights)]),
            ("domset", vec!["--weights", s(&weights)]),
            ("color", vec!["--demands", s(&demands)]),
            ("ham", vec![]),
            ("hamcycle", vec![]),
            ("paths", vec!["--pairs", s(&pairs), "--capacities", s(&caps)]),
            ("paths", vec!["--pairs", s(&pairs), "--capacities", s(&caps), "--all-sublists"]),
            ("homeo", vec!["--pattern", s(&pattern)]),
            ("homeo", vec!["--pattern", s(&pattern), "--anchors", "1,2"]),
            ("dpw", vec![]),
            ("cyclerank", vec![]),
        ];
        for (cmd, flags) in runs {
            let mut args = vec![cmd, s(&g)];
            args.extend(&flags);
            let (code, out, err) = dmw(&args);
            assert!(code == 0 || code == 1, "{cmd}: {err}");
            let witness = write(dir.path(), "out.json", &out);
            let mut vargs = vec!["verify", cmd, s(&g), s(&witness)];
            vargs.extend(&flags);
            let (vcode, vout, verr) = dmw(&vargs);
            assert_eq!(vcode, 0, "{cmd} {flags:?}\n{graph}\n{out}\n{vout}{verr}");
            assert_eq!(json(&vout)["valid"], true);
        }
    }
}

#[test]
fn verify_examples() {
    let dir = TempDir::new().unwrap();
    let c3 = write(dir.path(), "c3.txt", "3\n0 1\n1 2\n2 0\n");
    let good = write(dir.path(), "good.json", r#"{"vertices":[0]}"#);
    let bad = write(dir.path(), "bad.json", r#"{"vertices":[]}"#);
    assert_eq!(dmw(&["verify", "fvs", s(&c3), s(&good)]).0, 0);
    let (code, out, _) = dmw(&["verify", "fvs", s(&c3), s(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["valid"], false);

    let dag = write(dir.path(), "dag.txt", "3\n0 1\n1 2\n");
    let bags = write(dir.path(), "bags.json", r#"{"bags":[[0],[1],[2]]}"#);
    assert_eq!(dmw(&["verify", "dpw", s(&dag), s(&bags)]).0, 0);
    let backwards = write(dir.path(), "back.json", r#"{"bags":[[2],[1],[0]]}"#);
    assert_eq!(dmw(&["verify", "dpw", s(&dag), s(&backwards)]).0, 1);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let dag = write(dir.path(), "dag.txt", "3\n0 1\n1 2\n");
    let (code, out, _) = dmw(&["hamcycle", s(&dag)]);
    assert_eq!((code, json(&out)["exists"].clone()), (1, Value::Bool(false)));
    let looped = write(dir.path(), "loop.txt", "2\n0 0\n");
    let (code, _, err) = dmw(&["dmw", s(&looped)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(dmw(&["fvs", s(&dag), "--tau", "2000000000000"]).0, 2);
    assert_eq!(dmw(&["paths", s(&dag)]).0, 2);
}

#[test]
fn solver_outputs() {
    let dir = TempDir::new().unwrap();
    let c3 = write(dir.path(), "c3.txt", "3\n0 1\n1 2\n2 0\n");
    assert_eq!(json(&dmw(&["dmw", s(&c3)]).1)["dmw"], 3);
    assert_eq!(json(&dmw(&["color", s(&c3)]).1)["k"], 2);
    assert_eq!(json(&dmw(&["cyclerank", s(&c3)]).1)["rank"], 1);
    assert_eq!(json(&dmw(&["oracle", "cyclerank", s(&c3)]).1)["rank"], 1);
    assert_eq!(json(&dmw(&["oracle", "dmw", s(&c3)]).1)["dmw"], 3);
    let path = write(dir.path(), "path.txt", "4\n0 1\n1 2\n2 3\n");
    let pairs = write(dir.path(), "pairs.txt", "0 3\n");
    let out = json(&dmw(&["paths", s(&path), "--pairs", s(&pairs)]).1);
    assert_eq!(out["walks"], serde_json::json!([[0, 1, 2, 3]]));
    let big = write(dir.path(), "big.txt", &dmw(&["gen", "--n", "9", "--kind", "uniform"]).1);
    assert_eq!(dmw(&["oracle", "fvs", s(&big)]).0, 2);
}

#[test]
fn generator_is_reproducible() {
    let a = dmw(&["gen", "--n", "30", "--omega", "4", "--seed", "9"]).1;
    assert_eq!(a, dmw(&["gen", "--n", "30", "--omega", "4", "--seed", "9"]).1);
    assert!(a.starts_with("30\n"));
    assert_eq!(dmw(&["gen", "--n", "0"]).0, 2);
}

#[test]
fn ilp_from_json() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        dir.path(),
        "ilp.json",
        r#"{"constraints":[{"coeffs":[1],"relation":">=","rhs":3}],"objective":[1],"bounds":[[0,10]]}"#,
    );
    let (code, out, err) = dmw(&["ilp", s(&inst)]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    assert_eq!((v["status"].clone(), v["value"].clone()), (Value::from("optimal"), Value::from(3)));
}
