use std::fs;

use assert_cmd::Command;
use tempfile::tempdir;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn bin() -> Command {
    Command::cargo_bin("borderfj").unwrap()
}

#[test]
fn reduce_exit_codes() {
    bin().args(["reduce", &fixture("bench1.sys")]).assert().code(0);
    bin().args(["reduce", &fixture("gauge.sys")]).assert().code(2);
    bin().args(["reduce", "/nonexistent/system.sys"]).assert().code(3);
    bin().args(["reduce", &fixture("bench3.sys"), "--max-iter", "1"]).assert().code(4);
    bin().args(["reduce"]).assert().code(3);
    bin().args(["frobnicate"]).assert().code(3);
    bin().arg("--help").assert().code(0);
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempdir().unwrap();
    let p = dir.path().join("bad.sys");
    fs::write(&p, "[system]\n[variables]\nx\n[kinetic]\n1/2*dx^2\n[potential]\nx + (\n").unwrap();
    let out = bin().args(["reduce", p.to_str().unwrap()]).assert().code(3).get_output().stderr.clone();
    assert!(String::from_utf8(out).unwrap().contains("line"));
}

#[test]
fn summary_and_json() {
    let dir = tempdir().unwrap();
    let json = dir.path().join("r.json");
    let out = bin()
        .args(["reduce", &fixture("bench2.sys"), "--json", json.to_str().unwrap()])
        .assert()
        .code(0)
        .get_output()
        .stdout
        .clone();
    let text = String::from_utf8(out).unwrap();
    assert!(text.contains("Regularity Status   : Regular"));
    assert!(text.contains("Extended Dimension  : 8×8"));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["IterationCount"], 1);
    assert_eq!(doc["Theorem1"]["Pass"], true);
}

#[test]
fn seed_from_environment_is_deterministic() {
    let run = |seed: &str| {
        bin()
            .env("BORDERFJ_SEED", seed)
            .args(["reduce", &fixture("bench3.sys"), "--json", "-"])
            .assert()
            .code(0)
            .get_output()
            .stdout
            .clone()
    };
    assert_eq!(run("17"), run("17"));
}

#[test]
fn verify_passes() {
    let out = bin().args(["verify", &fixture("gauge.sys")]).assert().code(0).get_output().stdout.clone();
    assert!(String::from_utf8(out).unwrap().contains("Co-vanishing: PASS"));
}

#[test]
fn scan_writes_csv() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    bin()
        .args(["scan", &fixture("bench2.sys"), "--param", "k=0,1,2", "--csv", csv.to_str().unwrap()])
        .assert()
        .code(0);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["k,status,det", "0,Singular,0", "1,Regular,16", "2,Regular,64"]);
    bin().args(["scan", &fixture("bench2.sys"), "--param", "m=1"]).assert().code(3);
}

#[test]
fn bench_passes() {
    let out = bin().arg("bench").assert().code(0).get_output().stdout.clone();
    assert_eq!(String::from_utf8(out).unwrap().matches("PASS").count(), 4);
}
