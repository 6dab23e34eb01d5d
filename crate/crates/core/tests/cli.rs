//! End-to-end tests for the command-line interface.

use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmfusion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout parses as JSON")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited")
}

#[test]
fn weights_json_is_deterministic_and_correct() {
    let first = run(&["mm", "weights", "--p", "7", "--json"]);
    let second = run(&["mm", "weights", "--p", "7", "--json"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["p"], 7);
    assert_eq!(v["central_charge"], "25/28");
    let weights = v["weights"].as_array().unwrap();
    assert_eq!(weights.len(), 21);
    let rendered: Vec<&str> = weights.iter().map(|w| w["weight"].as_str().unwrap()).collect();
    for expected in ["0", "15/28", "39/14", "165/32", "675/224"] {
        assert!(rendered.contains(&expected), "missing weight {expected}");
    }
}

#[test]
fn fuse_outputs_match_known_tables() {
    let v = run_json(&["mm", "fuse", "--p", "3", "2',1", "2',1", "--json"]);
    assert_eq!(v["p"], 3);
    let result = v["result"].as_array().unwrap();
    let pairs: Vec<(String, u64)> = result
        .iter()
        .map(|t| (t["label"].as_str().unwrap().to_string(), t["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(pairs, vec![("1',1".to_string(), 1), ("1',2".to_string(), 1)]);

    let v = run_json(&["affine", "fuse", "--m", "2", "1", "1", "--json"]);
    let result = v["result"].as_array().unwrap();
    let labels: Vec<&str> = result.iter().map(|t| t["label"].as_str().unwrap()).collect();
    assert_eq!(labels, vec!["0", "2"]);
    assert!(result.iter().all(|t| t["multiplicity"] == 1));
}

#[test]
fn qdim_reports_golden_ratio_values() {
    let v = run_json(&["qdim", "--ring", "threeA", "--label", "2/5", "--json"]);
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    assert!((v["value"].as_f64().unwrap() - phi).abs() < 1e-9);

    let v = run_json(&["qdim", "--ring", "sixa", "--label", "M7", "--json"]);
    assert!((v["value"].as_f64().unwrap() - phi).abs() < 1e-9);
}

#[test]
fn glob_values_multiply_across_tensor_factors() {
    let u1 = run_json(&["glob", "--ring", "u1", "--json"])["value"].as_f64().unwrap();
    let threea = run_json(&["glob", "--ring", "threeA", "--json"])["value"].as_f64().unwrap();
    let mm7 = run_json(&["glob", "--ring", "mm:7", "--json"])["value"].as_f64().unwrap();
    assert!((u1 - 8539.568239522732).abs() < 1e-6);
    assert!((u1 - threea * mm7).abs() / u1 < 1e-9);
}

#[test]
fn braid_r_matches_the_lemma_entry() {
    let lemmas = run_json(&["braid", "lemmas", "--json"]);
    let entries = lemmas["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 4);
    assert!(entries.iter().all(|e| e["nonzero"] == true));
    assert_eq!(entries[0]["reduced"], "r(5,3,3,5)_{3,5}");
    assert_eq!(entries[0]["closed_form_agrees"], true);
    let expected_re = entries[0]["numeric"][0].as_f64().unwrap();
    let expected_im = entries[0]["numeric"][1].as_f64().unwrap();

    let base = ["braid", "r", "--p", "7", "5", "3", "3", "5", "--b", "3", "--d", "5"];
    let v = run_json(&[&base[..], &["--json"]].concat());
    assert!((v["value"]["re"].as_f64().unwrap() - expected_re).abs() < 1e-9);
    assert!((v["value"]["im"].as_f64().unwrap() - expected_im).abs() < 1e-9);
    assert_eq!(v["value"]["is_zero"], false);

    let alt = run_json(&[&base[..], &["--policy", "nfirst-max", "--json"]].concat());
    assert_eq!(v["value"]["exact"], alt["value"]["exact"]);

    let entry = run_json(&[
        "braid", "entry", "--p", "7", "1',5", "1',5", "1',3", "1',3", "--eps", "1',3", "--zeta",
        "1',5", "--json",
    ]);
    assert_eq!(entry["value"]["exact"], v["value"]["exact"]);
}

#[test]
fn json_parses_for_every_subcommand() {
    let invocations: Vec<Vec<&str>> = vec![
        vec!["mm", "weights", "--p", "5", "--json"],
        vec!["mm", "fuse", "--p", "5", "1',2", "1',2", "--json"],
        vec!["affine", "fuse", "--m", "3", "2", "3", "--json"],
        vec!["qdim", "--ring", "mm:7", "--json"],
        vec!["glob", "--ring", "affine:4", "--json"],
        vec!["braid", "r", "--p", "5", "3", "2", "3", "4", "--b", "2", "--d", "3", "--json"],
        vec![
            "braid", "entry", "--p", "7", "1',5", "1',5", "1',3", "1',3", "--eps", "1',3",
            "--zeta", "1',5", "--json",
        ],
        vec!["braid", "lemmas", "--json"],
        vec!["gko", "branch", "--m", "5", "--eps", "0", "--n", "0", "--json"],
        vec!["gko", "realize", "--json"],
        vec!["sixa", "classify", "--json"],
        vec!["sixa", "fusion-table", "--json"],
        vec!["sixa", "uniqueness", "--json"],
    ];
    for args in invocations {
        let v = run_json(&args);
        assert!(v.is_object() || v.is_array(), "unexpected JSON shape for {args:?}");
    }
}

#[test]
fn realize_reports_all_cases_matched() {
    let v = run_json(&["gko", "realize", "--json"]);
    let cases = v.as_array().unwrap();
    assert_eq!(cases.len(), 4);
    for case in cases {
        assert_eq!(case["report"]["matched"], true, "case {} mismatched", case["case"]);
    }
}

#[test]
fn uniqueness_output_is_stable() {
    let first = run(&["sixa", "uniqueness", "--json"]);
    let second = run(&["sixa", "uniqueness", "--json"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let v: Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["solutions"].as_array().unwrap().len(), 4);
    assert_eq!(v["orbit_matches"], true);
}

#[test]
fn out_flag_writes_to_a_file() {
    let dir = std::env::temp_dir().join(format!("mmfusion-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("weights.json");
    let redirected = run(&["mm", "weights", "--p", "7", "--json", "--out", path.to_str().unwrap()]);
    assert!(redirected.status.success());
    assert!(redirected.stdout.is_empty());
    let direct = run(&["mm", "weights", "--p", "7", "--json"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).ok();

    let bad = run(&["glob", "--ring", "threeA", "--out", "/nonexistent/dir/file"]);
    assert_eq!(exit_code(&bad), 1);
}

#[test]
fn exit_codes_follow_the_contract() {
    assert_eq!(exit_code(&run(&["mm", "weights", "--p", "7"])), 0);

    let domain = run(&["mm", "weights", "--p", "1"]);
    assert_eq!(exit_code(&domain), 1);
    assert!(String::from_utf8_lossy(&domain.stderr).starts_with("error:"));

    assert_eq!(exit_code(&run(&["mm", "fuse", "--p", "4", "9',9", "1',1"])), 1);
    assert_eq!(exit_code(&run(&["glob", "--ring", "nope"])), 1);
    assert_eq!(exit_code(&run(&["qdim", "--ring", "sixa", "--label", "M99"])), 1);

    assert_eq!(exit_code(&run(&["mm", "weights"])), 2);
    assert_eq!(exit_code(&run(&["mm", "nonsense"])), 2);
}
