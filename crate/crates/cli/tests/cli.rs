//! End-to-end runs of the binary: exit codes, output shapes, and the
//! reduce sidecars.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_paramx"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-it");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let path = tmp(name);
    fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const TRIANGLE: &str = r#"{"kind":"scss","n":3,"edges":[[0,1,1],[1,0,1],[1,2,1],[2,1,1],[0,2,1],[2,0,1]],"terminals":[0,1,2]}"#;

#[test]
fn solve_accepts_within_budget_and_rejects_below() {
    let f = write_tmp("tri.json", TRIANGLE);
    let path = f.to_str().unwrap();

    let ok = run(&["solve", "--algo", "scss-fpt", "--in", path, "--param", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert!(text.contains("cost 4"), "unexpected output: {text}");

    let reject = run(&["solve", "--algo", "scss-fpt", "--in", path, "--param", "1"]);
    assert_eq!(reject.status.code(), Some(2));
    assert!(stdout(&reject).starts_with("reject:"));
}

#[test]
fn solve_reports_infeasibility() {
    // 2 is unreachable, so no subgraph strongly connects the terminals.
    let f = write_tmp(
        "cut.json",
        r#"{"kind":"scss","n":3,"edges":[[0,1,1],[1,0,1],[2,0,1]],"terminals":[0,1,2]}"#,
    );
    let out = run(&["solve", "--algo", "scss-poly", "--in", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).starts_with("infeasible:"));
}

#[test]
fn solve_flags_usage_errors() {
    let f = write_tmp("tri2.json", TRIANGLE);
    let path = f.to_str().unwrap();

    let mismatch = run(&["solve", "--algo", "dsf", "--in", path]);
    assert_eq!(mismatch.status.code(), Some(1));

    let missing_param = run(&["solve", "--algo", "scss-fpt", "--in", path]);
    assert_eq!(missing_param.status.code(), Some(1));

    let bad_flag = run(&["solve", "--algo", "scss-poly"]);
    assert_eq!(bad_flag.status.code(), Some(1));
}

#[test]
fn solve_json_carries_verify_row() {
    let f = write_tmp("tri3.json", TRIANGLE);
    let out = run(&[
        "solve", "--algo", "scss-fpt", "--in", f.to_str().unwrap(), "--param", "3", "--json",
        "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["cost"], 4);
    assert_eq!(doc["verify"]["opt"], 3);
    assert_eq!(doc["verify"]["pass"], true);
}

#[test]
fn reduce_writes_image_and_sidecar() {
    let f = write_tmp("tri4.json", TRIANGLE);
    let out_path = tmp("tri4_dsf.json");
    let out = run(&[
        "reduce", "--from", "scss-dsf", "--in", f.to_str().unwrap(), "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let image: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(image["kind"], "dsf");
    assert_eq!(image["n"], 9);
    assert_eq!(image["pairs"].as_array().unwrap().len(), 6);

    let sidecar_path = format!("{}.provenance.json", out_path.display());
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(Path::new(&sidecar_path)).unwrap()).unwrap();
    assert_eq!(sidecar["reduction"], "scss-dsf");
    assert_eq!(sidecar["l"], 3);
    assert_eq!(sidecar["param_shift"], 6);
    assert_eq!(sidecar["pairs"], 6);
}

#[test]
fn reduce_mcc_records_edge_target() {
    let f = write_tmp(
        "mcc.json",
        r#"{"kind":"mcc","n":4,"edges":[[0,1,1],[0,2,1],[0,3,1],[1,2,1],[1,3,1],[2,3,1]],"colors":[0,1,2,3],"p":4}"#,
    );
    let out_path = tmp("mcc_mec.json");
    let out = run(&[
        "reduce", "--from", "mcc-mec", "--in", f.to_str().unwrap(), "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let sidecar: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(format!("{}.provenance.json", out_path.display())).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["p"], 4);
    assert_eq!(sidecar["k"], 6);
    assert_eq!(sidecar["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn reduce_projgame_reports_set_counts() {
    // One edge, alphabet of two, identity projection.
    let f = write_tmp(
        "game.json",
        r#"{"kind":"projgame","v1":1,"v2":1,"sigma":2,"edges":[[0,0]],"pi":[[0,[0,1]]]}"#,
    );
    let out_path = tmp("game_sc.json");
    let out = run(&[
        "reduce", "--from", "projgame-setcover", "--in", f.to_str().unwrap(), "--out",
        out_path.to_str().unwrap(), "--setsystem", "2,1,7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let sidecar: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(format!("{}.provenance.json", out_path.display())).unwrap(),
    )
    .unwrap();
    assert_eq!(sidecar["sets"], 4);
    let image: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    // One edge means the cover universe is exactly one set-system universe.
    assert_eq!(image["n"], sidecar["set_system"]["universe"]);
}

#[test]
fn gen_then_solve_round_trips() {
    let out_path = tmp("gen_dst.json");
    let gen = run(&[
        "gen", "--kind", "dst", "--out", out_path.to_str().unwrap(), "--n", "6", "--seed", "2",
    ]);
    assert_eq!(gen.status.code(), Some(0));
    let solve = run(&["solve", "--algo", "dst-exact", "--in", out_path.to_str().unwrap(), "--verify"]);
    assert_eq!(solve.status.code(), Some(0));
    assert!(stdout(&solve).contains("pass"));
}

#[test]
fn bench_empty_count_exits_clean() {
    let out = run(&["bench", "--suite", "figure1", "--count", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("0 rows"));

    let json = run(&["bench", "--suite", "figure1", "--count", "0", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 0);
}

#[test]
fn oracle_budget_env_is_honored() {
    let f = write_tmp("tri5.json", TRIANGLE);
    let out = bin()
        .args(["solve", "--algo", "scss-poly", "--in", f.to_str().unwrap(), "--verify"])
        .env("PARAMX_ORACLE_BUDGET", "edges=2")
        .output()
        .unwrap();
    // Budget of two edges forces the oracle to refuse the six-arc triangle.
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("opt=refused"), "{}", stdout(&out));

    let bad = bin()
        .args(["solve", "--algo", "scss-poly", "--in", f.to_str().unwrap(), "--verify"])
        .env("PARAMX_ORACLE_BUDGET", "edges=nope")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
