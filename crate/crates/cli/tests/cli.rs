use std::path::PathBuf;
use std::process::{Command, Output};

use nrd_core::sat::{parse_dimacs, solve, SolveResult, SolverConfig};

fn nrd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrd")).args(args).env_remove("NRD_FORMAT").output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("nrd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cancel_prints_the_residual() {
    let out = nrd(&["cancel", "0221221"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn boolbck_is_imbalanced_with_the_identity_witness() {
    let out = nrd(&["balance", "--catalog", "BoolBCK"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("imbalanced"));
    assert!(text.contains("= 100010001"));
}

#[test]
fn json_output_is_deterministic() {
    let a = nrd(&["--format", "json", "--seed", "7", "find-substructure", "--source", "OR3", "--target", "3LIN"]);
    let b = nrd(&["--format", "json", "--seed", "7", "find-substructure", "--source", "OR3", "--target", "3LIN"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["families"][0]["family"], serde_json::json!([[1, 2], [1, 3], [2, 3]]));
}

#[test]
fn failing_table_exits_with_one() {
    assert_eq!(nrd(&["verify-substructure", "or3-to-3lin"]).status.code(), Some(0));
    assert_eq!(nrd(&["verify-substructure", "r1s1-to-cat5-124"]).status.code(), Some(1));
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(nrd(&["cancel", "01x"]).status.code(), Some(2));
    assert_eq!(nrd(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(nrd(&["catalog", "NotAPredicate"]).status.code(), Some(2));
}

#[test]
fn generated_graph_verifies_through_files() {
    let graph = scratch("heawood.json");
    let witnesses = scratch("witnesses.json");
    let g = graph.to_str().unwrap();
    let w = witnesses.to_str().unwrap();
    assert!(nrd(&["gen-girth6", "--q", "2", "--out", g]).status.success());
    let found = nrd(&["verify-nrd", "--instance", g, "--predicate", "C6*|C6", "--out", w]);
    assert!(found.status.success());
    let given = nrd(&["verify-nrd", "--instance", g, "--predicate", "C6*|C6", "--witnesses", w]);
    assert!(given.status.success());
    assert!(stdout(&given).contains("21 witnesses verified"));
}

#[test]
fn dimacs_export_and_model_import_round_trip() {
    let cnf = scratch("or3.cnf");
    let model = scratch("or3.model");
    let c = cnf.to_str().unwrap();
    let base = ["find-substructure", "--source", "OR3", "--target", "3LIN", "--family", "12,13,23"];
    assert!(nrd(&[&base[..], &["--export-dimacs", c]].concat()).status.success());
    let formula = parse_dimacs(&std::fs::read_to_string(&cnf).unwrap()).unwrap();
    let SolveResult::Sat(values) = solve(&formula, &SolverConfig::default()).unwrap() else { panic!("unsatisfiable") };
    let literals: Vec<String> = values.iter().enumerate().map(|(i, &b)| if b { format!("{}", i + 1) } else { format!("-{}", i + 1) }).collect();
    std::fs::write(&model, format!("s SATISFIABLE\nv {} 0\n", literals.join(" "))).unwrap();
    let out = nrd(&[&base[..], &["--model", model.to_str().unwrap()]].concat());
    assert!(out.status.success());
    assert!(stdout(&out).contains("000 -> 000"));
}

#[test]
fn exponent_fit_of_exact_power_law() {
    let out = nrd(&["--format", "json", "fit", "--points", "10:100,20:400,40:1600"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["exponent"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn conditional_lift_of_c6_has_23_tuples() {
    let out = nrd(&["cond2plain", "C6*|C6"]);
    assert!(stdout(&out).contains("23 tuples of arity 4"));
}

#[test]
fn permutation_audit_group_reports_the_anomaly_without_failing() {
    let out = nrd(&["verify-all", "--only", "permutations"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("6 passed, 0 failed, 1 anomalies"));
}
