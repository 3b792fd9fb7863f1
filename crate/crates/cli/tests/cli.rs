use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value as Json;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intensio"))
        .args(args)
        .env_remove("INTENSIO_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn json(o: &Output) -> Json {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

#[test]
fn degree_of_concept_to_object_is_three() {
    let o = run(&["degree", "((e t) e)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn reduce_type_prints_canonical_form() {
    let o = run(&["reduce-type", "((e t) e)'"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "((e' t') e')");
}

#[test]
fn malformed_type_is_a_usage_error() {
    let o = run(&["degree", "(e"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn missing_file_is_an_input_error() {
    let o = run(&["classify", "--instance", "/nonexistent/instance.sexp"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rm_pipeline_on_many_objects_one_world_fails_fine_grained() {
    let o = run(&["rm-pipeline", "--frame", &data("kaplan_5_1.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["outcome"], "axiom-failure");
    assert_eq!(v["verdict"]["axiom"], "fine-grained");
    assert_eq!(v["verdict"]["holds"], false);
}

#[test]
fn rm_pipeline_on_two_worlds_fails_senses_are_objects() {
    let v = json(&run(&["rm-pipeline", "--frame", &data("kaplan_2_2.json")]));
    assert_eq!(v["outcome"], "axiom-failure");
    assert_eq!(v["verdict"]["axiom"], "senses-are-objects");
}

#[test]
fn rm_pipeline_on_restricted_frame_escapes() {
    let v = json(&run(&["rm-pipeline", "--frame", &data("restricted.json")]));
    assert_eq!(v["outcome"], "diagonal-escape");
    assert_eq!(v["construction"]["iotaInjective"], true);
}

#[test]
fn diagonal_instance_is_impredicative() {
    let o = run(&["classify", "--instance", &data("diag.sexp")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["predicative"], false);
    assert_eq!(v["violations"].as_array().unwrap().len(), 2);
}

#[test]
fn classify_explain_is_text() {
    let o = run(&["classify", "--instance", &data("builder.sexp"), "--explain"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(serde_json::from_slice::<Json>(&o.stdout).is_err());
    assert!(stdout(&o).contains("predicative"));
}

#[test]
fn typecheck_exit_codes() {
    let ok = run(&["typecheck", &data("diag_matrix.sexp")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["wellTyped"], true);
    let bad = run(&["typecheck", &data("ill_typed.sexp")]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["wellTyped"], false);
}

#[test]
fn cantor_all_verifies_every_map() {
    let v = json(&run(&["cantor", "--type", "e", "--all", "--objects", "2"]));
    assert_eq!(v["maps"], 16);
    assert_eq!(v["verified"], 16);
}

#[test]
fn smuggle_random_is_seed_deterministic() {
    let a = run(&["smuggle", "--random", "3", "--seed", "11"]);
    let b = run(&["smuggle", "--random", "3", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    for r in json(&a).as_array().unwrap() {
        assert_eq!(r["report"]["verified"], true);
        assert_eq!(r["report"]["rebuiltDiagonal"], r["report"]["diagonal"]);
    }
}

#[test]
fn walkthrough_is_seed_deterministic() {
    let a = run(&["walkthrough", "--seed", "5"]);
    let b = run(&["walkthrough", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# Walkthrough"));
}

#[test]
fn probe_reaches_an_undefined_extension() {
    let v = json(&run(&[
        "probe",
        "--objects",
        "3",
        "--operator",
        &data("worked_operator.json"),
        "--budget",
        "10",
    ]));
    assert_eq!(v["end"], "undefined-extension");
    assert!(v["chain"].as_array().unwrap().len() >= 2);
}

#[test]
fn cap_env_var_bounds_materialization() {
    let args = ["frame", "--objects", "2", "--type", "((e t) t)", "--list"];
    assert_eq!(run(&args).status.code(), Some(0));
    let capped = Command::new(env!("CARGO_BIN_EXE_intensio"))
        .args(args)
        .env("INTENSIO_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("16"));
    let flag = run(&["--cap", "8", "frame", "--objects", "2", "--type", "(e t)", "--list"]);
    assert_eq!(flag.status.code(), Some(0));
    assert_eq!(json(&flag)["domainCap"], 8);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("intensio-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sigma.json");
    let o = run(&["sigma", "--formula", &data("nonempty.set"), "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Json = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["class"], "Σ_1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn defn_over_v3_is_the_powerset() {
    let v = json(&run(&["defn", "--structure", &data("v3.json"), "--policy", "with-params"]));
    assert_eq!(v["count"], 16);
    assert_eq!(v["isPowerset"], true);
}
