use std::process::Command;

use clap::Parser;
use symdom::cli::{execute, parse_config, Cli};

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_symdom")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn payload(args: &[&str]) -> serde_json::Value {
    let (code, text) = run(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str::<serde_json::Value>(&text).unwrap()["payload"].clone()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "covariance", "--space", "little", "--d", "2", "--nu", "4", "--lambda", "1", "--seed", "7"]).0, 0);
    assert_eq!(run(&["check", "factorization", "--d", "2", "--n", "2", "--samples", "10", "--seed", "7"]).0, 0);
    assert_eq!(run(&["probe", "commutant", "--d", "2", "--n", "2", "--nu", "4", "--expect-irreducible"]).0, 0);
    assert_eq!(run(&["probe", "commutant", "--family", "identity-only", "--expect-irreducible"]).0, 1);
    assert_eq!(run(&["check", "covariance", "--radius", "1.2"]).0, 2);
    assert_eq!(run(&["check", "covariance", "--tol", "0"]).0, 2);
    assert_eq!(run(&["scan", "wallach", "--nu-min", "1", "--nu-max", "0"]).0, 2);
    assert_eq!(run(&["eval", "fk", "--nu", "1", "--format", "csv"]).0, 2);
    assert_eq!(run(&["eval", "big-kernel", "--nu", "4"]).0, 2);
}

#[test]
fn flags_override_config_over_defaults() {
    let cfg = parse_config("nu = 3\n# comment\nlambda=2\nd=1\n").unwrap();
    assert_eq!(cfg["nu"], "3");
    assert!(parse_config("nonsense").is_err());

    let dir = std::env::temp_dir().join(format!("symdom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    std::fs::write(&path, "nu=3\nd=1\nlambda=2\n").unwrap();
    let p = path.to_str().unwrap();
    let cli = Cli::try_parse_from(["symdom", "check", "covariance", "--config", p, "--nu", "2.5"]).unwrap();
    let cfg = execute(&cli.command).unwrap().payload.config;
    assert_eq!(cfg["nu"], "2.5");
    assert_eq!(cfg["lambda"], "2");
    assert_eq!(cfg["d"], "1");
    assert_eq!(cfg["samples"], "20");
}

#[test]
fn eval_payloads() {
    let fk = payload(&["eval", "fk", "--nu", "3.5", "--N", "60"]);
    assert_eq!(fk["values"]["coefficients"].as_array().unwrap().len(), 61);
    let kappa = payload(&["eval", "kappa", "--d", "1", "--nu", "2", "--n", "2", "--variant", "both"]);
    assert_eq!(kappa["values"]["selected"], "proof");
    assert!(kappa["values"]["kappa"]["theorem"].is_array());
    let k = payload(&["eval", "little-kernel", "--d", "1", "--nu", "2", "--z", "0", "--w", "0.5", "--zeta", "1", "--omega", "1"]);
    assert_eq!(k["values"]["value"][0], 1.0);
}

#[test]
fn scans_emit_csv() {
    let (code, csv) = run(&["scan", "bounded", "--d", "1", "--nu", "3", "--n", "2", "--c", "1,1,1", "--b", "0.5,1,2,4"]);
    assert_eq!(code, 0);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("nu,b,verdict,min_eig,max_eig"));
    assert_eq!(lines.count(), 4);
    let w = payload(&["scan", "weights", "--nu", "5", "--nu-star", "3", "--n", "2", "--c", "1,1,1", "--format", "json"]);
    assert_eq!(w["values"]["c_prime"][0], 1.0);
}
