use quadalg::canon::{catalog_form, SystemId};
use quadalg::contract::ContractionFamily;
use quadalg::forms::{group_act, ScaledGroupElem, SymForm};
use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadalg")).args(args).env_remove("QUADALG_DATA").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn temp(content: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(content.as_bytes()).unwrap();
    f
}

const E13_E4: &str = r#"{"hat_A": [[[[1,"1"]],[],[[0,"1/2"]],[]],[[],[[0,"1"]],[],[]],[[],[],[[0,"1"]],[]],[[],[],[],[[0,"1"]]]]}"#;

#[test]
fn classify_form_file() {
    let s6 = serde_json::to_string(&catalog_form(SystemId::S6).unwrap().0).unwrap();
    let f = temp(&s6);
    let o = run(&["classify", "--form", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["label"], "B22(1,1)");
    assert_eq!(v["rank_invariants"], serde_json::json!([4, 2]));
    // the emitted witness re-parses and normalizes the input
    let w: ScaledGroupElem = serde_json::from_value(v["witness"].clone()).unwrap();
    let b: SymForm = serde_json::from_str(&s6).unwrap();
    assert_eq!(group_act(&w, &b), "B22(1,1)".parse::<quadalg::canon::CanonicalLabel>().unwrap().canonical_matrix());
}

#[test]
fn classify_casimir_file_and_poly() {
    let f = temp(r#"{"casimir": "L1^2+L2^2+H^2"}"#);
    let a = json(&run(&["classify", "--form", f.path().to_str().unwrap()]));
    let b = json(&run(&["classify", "--poly", "L1^2+L2^2+H^2"]));
    assert_eq!(a, b);
    assert_eq!(a["label"], "B21(0,0)");
}

#[test]
fn contract_verify_directions() {
    let w = temp(E13_E4);
    let p = w.path().to_str().unwrap();
    let o = run(&["contract-verify", "--witness", p, "--source", "E13", "--target", "E4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["status"], "VerifiedStrict");
    let o = run(&["contract-verify", "--witness", p, "--source", "E4", "--target", "E13"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn errors_are_machine_readable() {
    let o = run(&["classify", "--poly", "L1*X"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "InvalidForm");
    let o = run(&["ranks", "--source", "E99"]);
    assert_eq!(json(&o)["error"], "UnknownSystem");
    let bad = temp(r#"{"hat_A": [[[[0,"1"]],[],[],[]],[[],[[0,"1"]],[],[]],[[],[],[[0,"1"]],[[0,"1"]]],[[],[],[],[[0,"1"]]]]}"#);
    let o = run(&["contract-verify", "--witness", bad.path().to_str().unwrap(), "--source", "E3", "--target", "E3"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "InvalidFamily");
    assert_eq!(run(&["contract-search", "--source", "E3", "--target", "E5", "--bound", "17"]).status.code(), Some(2));
}

#[test]
fn s5_notice_and_aliases() {
    let o = run(&["ranks", "--source", "s5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("E14"));
    let o = run(&["equiv", "--source", "S5", "--target", "e14"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&run(&["ranks", "--source", "D4(b)D"]))["rank_B"], 4);
    assert_eq!(run(&["equiv", "--source", "E14", "--target", "E4"]).status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    let a = run(&["classify", "--source", "D4bD", "--seed", "11"]);
    let b = run(&["classify", "--source", "D4bD", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a)["round_trip"]["stable"], 20);
}

#[test]
fn search_output_round_trips() {
    let o = run(&["contract-search", "--source", "S6", "--target", "E18", "--bound", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["outcome"], "Found");
    let f: ContractionFamily = serde_json::from_value(v["family"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&f).unwrap(), v["family"]);
    let o = run(&["contract-search", "--source", "E4", "--target", "E13"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["certificate"]["kind"], "RankBIncrease");
}

#[test]
fn table6_reports_mismatches() {
    let o = run(&["table6", "--certificates"]);
    // two cells of the published grid contradict the listed S3 polynomial
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("2 cell(s)"));
    let v = json(&o);
    assert_eq!(v["mismatches"], 2);
    assert_eq!(v["cells"].as_array().unwrap().len(), 196);
    let csv = run(&["table6", "--format", "csv"]);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("source,target,expected,emitted"));
}

#[test]
fn algebra_commands() {
    let o = run(&["structure", "--poly", "L1^2+2*L2*X^2+H^2"]);
    let v = json(&o);
    assert_eq!(v["{L1,L2}"], "4*L2*X");
    let o = run(&["stackel", "--source", "S3", "--format", "markdown"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "L1^2-L1*H*c12-L1*H*c22+L1*X^2+L2^2-H*X^2*c12");
    let o = run(&["stackel", "--poly", "L1^2+a1*X^2", "--matrix", "1,0,0,1"]);
    assert_eq!(json(&o)["class_casimir"], "L1^2");
    let g = temp(
        r#"{"chart": "Ambient3", "X": "s1*ps2-s2*ps1", "L1": "(s2*ps3-s3*ps2)^2",
            "L2": "(s2*ps3-s3*ps2)*(s3*ps1-s1*ps3)",
            "H": "(s2*ps3-s3*ps2)^2+(s3*ps1-s1*ps3)^2+(s1*ps2-s2*ps1)^2"}"#,
    );
    let gp = g.path().to_str().unwrap();
    let o = run(&["realize", "--witness", gp, "--poly", "L1^2+L2^2-L1*H+L1*X^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["K"], "1");
    assert_eq!(run(&["realize", "--witness", gp, "--poly", "L1^2+L2^2"]).status.code(), Some(1));
    let cat = json(&run(&["catalog"]));
    assert_eq!(cat.as_array().unwrap().len(), 15);
    let csv = run(&["ranks", "--source", "E4", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&csv.stdout), "key,value\nrank_B,\"3\"\nrank_b,\"0\"\n");
}

#[test]
fn data_directory_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("witnesses.json"), "[]").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_quadalg")).args(["table6"]).env("QUADALG_DATA", dir.path()).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"], "MissingWitness");
}
