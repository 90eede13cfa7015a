use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

const TREFOIL: &str = "gens: a b\nrel: a b a b^-1 a^-1 b^-1\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn write_json(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    write(dir, name, &v.to_string())
}

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_abstorus"));
    cmd.args(args).env_remove("ABSTORUS_GRID_CEILING");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn abstorus(args: &[&str]) -> Output {
    run(args, &[])
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn result(o: &Output) -> Value {
    assert_eq!(code(o), 0, "stderr: {}", String::from_utf8_lossy(&o.stderr));
    stdout_json(o)["result"].clone()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn coset_json(rows: Value, phi: &[&str]) -> Value {
    let n = rows.as_array().and_then(|r| r.first()).map_or(1, |r| r.as_array().unwrap().len());
    json!({"ambient_rank": n, "lattice": rows, "phi": phi})
}

fn point_set(n: usize, points: &[&[&str]]) -> Value {
    let eye: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let cosets: Vec<Value> = points.iter().map(|p| coset_json(json!(eye), p)).collect();
    json!({"ambient_rank": n, "cosets": cosets})
}

fn koszul() -> Value {
    let minus_one = |e: [i64; 2]| json!([[e, 1], [[0, 0], -1]]);
    json!({
        "vars": 2,
        "ranks": [1, 2, 1],
        "differentials": [
            {"rows": 2, "cols": 1, "entries": [[0, 0, minus_one([1, 0])], [1, 0, minus_one([0, 1])]]},
            {"rows": 1, "cols": 2, "entries": [[0, 0, [[[0, 1], -1], [[0, 0], 1]]], [0, 1, minus_one([1, 0])]]},
        ],
    })
}

#[test]
fn snf_of_identity_and_a_known_matrix() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", "[[1,0],[0,1]]");
    let r = result(&abstorus(&["snf", s(&id)]));
    assert_eq!(r["diag"], json!([[1, 0], [0, 1]]));
    assert_eq!(r["rank"], json!(2));
    let m = write(&dir, "m.json", "[[2,4],[6,8]]");
    let r = result(&abstorus(&["snf", s(&m)]));
    assert_eq!(r["diag"], json!([[2, 0], [0, 4]]));
    assert_eq!(r["invariant_factors"], json!([2, 4]));
}

#[test]
fn hnf_reports_pivots() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", "[[2,4],[6,8]]");
    let r = result(&abstorus(&["hnf", s(&m)]));
    assert_eq!(r["rank"], json!(2));
    assert_eq!(r["pivots"], json!([0, 1]));
}

#[test]
fn every_output_carries_provenance() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", "[[3]]");
    let out = stdout_json(&abstorus(&["snf", s(&m)]));
    let prov = &out["provenance"];
    assert_eq!(prov["tool"], json!("abstorus"));
    assert_eq!(prov["command"], json!("snf"));
    assert_eq!(prov["inputs"][0]["path"], json!(s(&m)));
    use sha2::{Digest, Sha256};
    assert_eq!(prov["inputs"][0]["sha256"], json!(hex::encode(Sha256::digest(b"[[3]]"))));
}

#[test]
fn malformed_json_exits_with_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{\n  \"ambient_rank\": 1,\n  oops\n}");
    let o = abstorus(&["set", "closure", s(&bad)]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn closure_is_idempotent_through_files() {
    let dir = TempDir::new().unwrap();
    let set = json!({
        "ambient_rank": 2,
        "cells": [{"positive": coset_json(json!([[1, -1]]), &["1/3"]), "excluded": [coset_json(json!([[1, 0], [0, 1]]), &["1/3", "0"])]}],
    });
    let a = write_json(&dir, "a.json", &set);
    let once = dir.path().join("once.json");
    assert_eq!(code(&abstorus(&["set", "closure", s(&a), "-o", s(&once)])), 0);
    let twice = result(&abstorus(&["set", "closure", s(&once)]));
    let once: Value = serde_json::from_str(&std::fs::read_to_string(&once).unwrap()).unwrap();
    assert_eq!(once["result"], twice);
    assert!(twice["cells"][0]["excluded"].as_array().unwrap().is_empty());
}

#[test]
fn double_complement_is_equal() {
    let dir = TempDir::new().unwrap();
    let set = point_set(2, &[&["1/2", "0"], &["1/4", "3/4"]]);
    let a = write_json(&dir, "a.json", &set);
    let c1 = dir.path().join("c1.json");
    let c2 = dir.path().join("c2.json");
    assert_eq!(code(&abstorus(&["set", "complement", s(&a), "-o", s(&c1)])), 0);
    assert_eq!(code(&abstorus(&["set", "complement", s(&c1), "-o", s(&c2)])), 0);
    let o = abstorus(&["set", "equal", s(&a), s(&c2)]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "true");
    let o = abstorus(&["set", "equal", s(&a), s(&c1)]);
    assert_eq!(code(&o), 1);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "false");
}

#[test]
fn oracle_level_confirms_boolean_results() {
    let dir = TempDir::new().unwrap();
    let a = write_json(&dir, "a.json", &point_set(1, &[&["1/6"], &["1/2"]]));
    let b = write_json(&dir, "b.json", &json!({"ambient_rank": 1, "cosets": [coset_json(json!([[1]]), &["1/2"])]}));
    for op in ["union", "intersect", "difference"] {
        let r = result(&abstorus(&["set", op, s(&a), s(&b), "--oracle-level", "12"]));
        assert_eq!(r["oracle"], json!({"level": 12, "agrees": true}), "{op}");
    }
    let r = result(&abstorus(&["set", "intersect", s(&a), s(&b)]));
    assert_eq!(r["cells"].as_array().unwrap().len(), 1);
}

#[test]
fn galois_orbit_and_check() {
    let dir = TempDir::new().unwrap();
    let z6 = write_json(&dir, "z6.json", &point_set(1, &[&["1/6"]]));
    let r = result(&abstorus(&["galois", "orbit", s(&z6), "--level", "6"]));
    assert_eq!(r["orbit"].as_array().unwrap().len(), 2);
    let o = abstorus(&["galois", "check", s(&z6), "--level", "6"]);
    assert_eq!(code(&o), 1);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "moved by u=5");
    let one = write_json(&dir, "one.json", &point_set(1, &[&["0"]]));
    let o = abstorus(&["galois", "check", s(&one), "--level", "6"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "invariant");
}

#[test]
fn exp_bridge_both_ways() {
    let dir = TempDir::new().unwrap();
    let c = write_json(&dir, "c.json", &coset_json(json!([[1, 0]]), &["1/6"]));
    let r = result(&abstorus(&["exp", "to-dr", s(&c), "--round-trip"]));
    assert_eq!(r["round_trip"], json!(true));
    assert_eq!(r["image"]["translate"], json!(["1/6", "0"]));
    assert_eq!(r["image"]["direction"], json!([[0, 1]]));
    let v =
        write_json(&dir, "v.json", &json!({"ambient_rank": 2, "translate": ["1/6", "0"], "direction": [["0", "1"]]}));
    let r = result(&abstorus(&["exp", "to-betti", s(&v)]));
    assert_eq!(r["lattice"], json!([[1, 0]]));
    assert_eq!(r["phi"], json!(["1/6"]));
}

#[test]
fn irrational_direction_exits_4() {
    let dir = TempDir::new().unwrap();
    let v = write_json(
        &dir,
        "v.json",
        &json!({"ambient_rank": 2, "translate": ["0", "0"], "direction": [["1", "sqrt(2)"]]}),
    );
    let o = abstorus(&["exp", "to-betti", s(&v)]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not defined over ℚ"));
}

#[test]
fn trefoil_jump_locus_from_a_presentation() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "trefoil.txt", TREFOIL);
    let r = result(&abstorus(&["jumploci", s(&p), "--i", "1", "--k", "1", "--level", "12", "--symmetry", "--galois"]));
    let phis: Vec<&str> =
        r["certificates"].as_array().unwrap().iter().map(|c| c["coset"]["phi"][0].as_str().unwrap()).collect();
    assert_eq!(phis.len(), 3);
    for want in ["1/6", "5/6"] {
        assert!(phis.contains(&want), "{phis:?}");
    }
    assert!(r["certificates"].as_array().unwrap().iter().all(|c| c["holds"] == json!(true)));
    assert_eq!(r["symmetry"]["pass"], json!(true));
    assert_eq!(r["galois"]["invariant"], json!(true));
}

#[test]
fn fox_output_feeds_jumploci() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "trefoil.txt", TREFOIL);
    let fox = dir.path().join("fox.json");
    assert_eq!(code(&abstorus(&["fox", s(&p), "-o", s(&fox)])), 0);
    let r = result(&abstorus(&["jumploci", s(&fox), "--i", "1", "--k", "1", "--level", "12"]));
    assert_eq!(r["certificates"].as_array().unwrap().len(), 3);
}

#[test]
fn koszul_complex_file() {
    let dir = TempDir::new().unwrap();
    let k = write_json(&dir, "koszul.json", &koszul());
    let r = result(&abstorus(&["jumploci", s(&k), "--i", "1", "--k", "2", "--level", "6"]));
    assert_eq!(r["locus"], point_set_canonical());
}

/// `{(1, 1)}` as the tool prints it.
fn point_set_canonical() -> Value {
    json!({
        "ambient_rank": 2,
        "cells": [{"positive": {"ambient_rank": 2, "lattice": [[1, 0], [0, 1]], "phi": ["0", "0"]}, "excluded": []}],
    })
}

#[test]
fn verify_accepts_the_right_claim_and_rejects_a_wrong_one() {
    let dir = TempDir::new().unwrap();
    let k = write_json(&dir, "koszul.json", &koszul());
    let good = write_json(&dir, "good.json", &point_set(2, &[&["0", "0"]]));
    let o = abstorus(&["jumploci", s(&k), "--i", "1", "--k", "1", "--level", "6", "--verify", s(&good)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let wrong = write_json(&dir, "wrong.json", &point_set(2, &[&["0", "0"], &["1/2", "0"]]));
    let o = abstorus(&["jumploci", s(&k), "--i", "1", "--k", "1", "--level", "6", "--verify", s(&wrong)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn grid_budget_exits_5() {
    let dir = TempDir::new().unwrap();
    let k = write_json(&dir, "koszul.json", &koszul());
    let args = ["jumploci", s(&k), "--i", "1", "--k", "1", "--level", "100"];
    assert_eq!(code(&run(&args, &[("ABSTORUS_GRID_CEILING", "9999")])), 5);
    let mut with_flag = args.to_vec();
    with_flag.extend(["--grid-ceiling", "10"]);
    assert_eq!(code(&abstorus(&with_flag)), 5);
    // the flag overrides the environment
    with_flag.pop();
    with_flag.push("10000");
    assert_eq!(code(&run(&with_flag, &[("ABSTORUS_GRID_CEILING", "10")])), 0);
}

#[test]
fn rank_mismatch_exits_3() {
    let dir = TempDir::new().unwrap();
    let a = write_json(&dir, "a.json", &point_set(1, &[&["0"]]));
    let b = write_json(&dir, "b.json", &point_set(2, &[&["0", "0"]]));
    assert_eq!(code(&abstorus(&["set", "union", s(&a), s(&b)])), 3);
    let k = write_json(&dir, "koszul.json", &koszul());
    let o = abstorus(&["jumploci", s(&k), "--i", "1", "--k", "1", "--level", "6", "--verify", s(&a)]);
    assert_eq!(code(&o), 3);
}

#[test]
fn results_do_not_depend_on_the_thread_count() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "trefoil.txt", TREFOIL);
    let args = |n: &'static str| {
        ["--parallel", n, "jumploci", s(&p), "--i", "1", "--k", "1", "--level", "24"].map(String::from)
    };
    let one = abstorus(&args("1").iter().map(String::as_str).collect::<Vec<_>>());
    let four = abstorus(&args("4").iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn output_file_is_written_atomically() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.json", "[[2,4],[6,8]]");
    let out = dir.path().join("out.json");
    let o = abstorus(&["snf", s(&m), "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["diag"], json!([[2, 0], [0, 4]]));
    // only the output file and the input remain: no temporary files left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}
