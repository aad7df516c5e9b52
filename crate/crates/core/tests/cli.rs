use std::process::{Command, Output};

use serde_json::Value;

fn spinhvt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinhvt"))
        .args(args)
        .env_remove("HVTSIM_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn table_json_shape() {
    let out = spinhvt(&["table", "--id", "I", "--n", "20000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["spec", "results", "conformance", "version", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["seed"], 42);
    assert_eq!(v["results"]["Q"].as_array().unwrap().len(), 5);
    assert_eq!(v["results"]["P"].as_array().unwrap().len(), 5);
    assert_eq!(v["spec"]["command"]["id"], "I");
}

#[test]
fn table_csv() {
    let out = spinhvt(&["table", "--id", "III", "--mode", "exact", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "state,Q,P\nA,1,0.5\nB,0,NA\nC,0,NA\nD,1,1\nE,1,1\n");
}

#[test]
fn exit_codes() {
    assert_eq!(spinhvt(&["table", "--id", "V"]).status.code(), Some(2));
    assert_eq!(spinhvt(&["table", "--id", "I", "--n", "0"]).status.code(), Some(2));
    assert_eq!(spinhvt(&["device", "--model", "A", "--device", "1,2,3"]).status.code(), Some(2));
    assert_eq!(spinhvt(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(spinhvt(&["--help"]).status.code(), Some(0));

    // QS-IV fails for D under the strict rule
    let strict = spinhvt(&["qsfacts", "--model", "D", "--rule", "strict", "--mode", "exact"]);
    assert_eq!(strict.status.code(), Some(1));
    assert_eq!(json(&strict)["conformance"]["pass"], false);

    let err = spinhvt(&["inconsistency", "--model", "A"]);
    assert_eq!(err.status.code(), Some(3));
    assert_eq!(json(&err)["error"]["code"], "invalid_input");
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_spinhvt"));
        c.args(["device", "--model", "A", "--device", "z", "--n", "1000"]).args(extra);
        match env {
            Some(s) => c.env("HVTSIM_SEED", s),
            None => c.env_remove("HVTSIM_SEED"),
        };
        json(&c.output().unwrap())
    };
    assert_eq!(run(None, &[])["seed"], 42);
    assert_eq!(run(Some("9"), &[])["seed"], 9);
    assert_eq!(run(Some("9"), &["--seed", "5"])["seed"], 5);
    assert_ne!(run(Some("9"), &[])["results"], run(None, &[])["results"]);
}

#[test]
fn output_files_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |path: &std::path::Path, workers: &str| {
        let p = path.to_str().unwrap().to_string();
        let out = spinhvt(&["table", "--id", "IV", "--n", "20000", "--workers", workers, "--output", &p]);
        assert_eq!(out.status.code().map(|c| c <= 1), Some(true));
        assert!(out.stdout.is_empty());
    };
    args(&a, "1");
    args(&b, "8");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn other_subcommands() {
    let sweep = spinhvt(&["singlet", "--sweep", "0:180:45", "--mode", "exact", "--format", "csv"]);
    assert_eq!(sweep.status.code(), Some(0));
    let text = String::from_utf8(sweep.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "angle,E");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0,-1"));

    let chsh = json(&spinhvt(&["chsh", "--angles", "0,90,45,135", "--mode", "exact"]));
    assert!((chsh["results"]["S"].as_f64().unwrap().abs() - 2.0 * 2f64.sqrt()).abs() < 1e-9);

    let bohm = spinhvt(&["bohm", "--j1", "0.25", "--trials", "4000"]);
    assert_eq!(bohm.status.code(), Some(0));
    assert!(json(&bohm)["results"]["max_drift"].as_f64().unwrap() < 1e-9);

    let diag = json(&spinhvt(&["broadcast", "--state", "-z", "--basis", "z"]));
    assert_eq!(diag["results"]["copy_error"], 0.0);
    let off = json(&spinhvt(&["broadcast", "--state", "x", "--basis", "z"]));
    assert!((off["results"]["copy_error"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(off["conformance"]["pass"], true);

    let c = json(&spinhvt(&["inconsistency", "--model", "C"]));
    assert_eq!(c["results"]["representation_mismatch"], true);

    let rep = spinhvt(&["repeat", "--model", "E", "--prep", "II", "--first", "-0.6,0,0.8", "--second", "90,0", "--n", "2000"]);
    assert_eq!(rep.status.code(), Some(0));
    assert!(json(&rep)["results"]["first"].is_object());
}
