use std::process::{Command, Output};

use serde_json::{json, Value};

fn tpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpp"))
        .args(args)
        .env_remove("TPP_ORDER_CAP")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("single JSON document")
}

fn lines(out: &Output) -> Vec<Value> {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

const CASE_IX: [&str; 8] = ["--group", "cyc:6", "--s", "0,1", "--t", "1,2", "--u", "2,0"];

#[test]
fn check_reports_both_checkers() {
    let v = stdout_json(&tpp(&[&["check"], &CASE_IX[..]].concat()));
    assert_eq!(v, json!({"tpp": false, "naive": false, "quotient": false}));

    let v = stdout_json(&tpp(&["check", "--group", "cyc:6", "--s", "0,1,2,3,4,5", "--t", "0", "--u", "0"]));
    assert_eq!(v["tpp"], json!(true));
}

#[test]
fn classify_case_ix() {
    let v = stdout_json(&tpp(&[&["classify"], &CASE_IX[..]].concat()));
    assert_eq!((&v["case"], &v["w"], &v["r"]), (&json!("ix"), &json!(3), &json!(3)));
    assert_eq!(v["minimal_disjointness"], json!(true));
}

#[test]
fn inject_reports_image_sizes() {
    let v = stdout_json(&tpp(&[&["inject"], &CASE_IX[..]].concat()));
    assert_eq!(v["injective"], json!({"eps_mp": false, "eps_pq": true, "eps_mq": true}));
    assert_eq!(v["image_sizes"]["eps_mp"], json!(3));
}

#[test]
fn space_uses_decimal_strings() {
    assert_eq!(stdout_json(&tpp(&["space", "--n", "4"])), json!({"n": 4, "triples": "1331"}));
    let v = stdout_json(&tpp(&["space", "--n", "64"]));
    assert_eq!(
        v["triples"],
        json!("6277101735386680697480727873624666274556788129537799737151") // (2^64 - 65)^3
    );
}

#[test]
fn bounds_with_sizes() {
    let v = stdout_json(&tpp(&["bounds", "--n", "6", "--sizes", "3,3,4"]));
    assert_eq!((&v["add_lower"], &v["add_upper"]), (&json!(6), &json!(9)));
    assert_eq!(v["additive"]["violated"], json!("upper"));
    let v = stdout_json(&tpp(&["bounds", "--group", "sym:3", "--sizes", "2,2,2", "--maximal"]));
    assert_eq!(v["multiplicative"]["pass"], json!(true));
    assert_eq!(v["additive"]["pass"], json!(true));
}

#[test]
fn group_info_names_elements() {
    let v = stdout_json(&tpp(&["group-info", "--group", "dih:3", "--table"]));
    assert_eq!(v["order"], json!(6));
    assert_eq!(v["abelian"], json!(false));
    assert_eq!(v["elements"][4]["name"], json!("r s"));
    assert_eq!(v["table"].as_array().unwrap().len(), 6);
}

#[test]
fn search_results_round_trip_through_check_and_classify() {
    let dir = tempfile::tempdir().unwrap();
    let records = lines(&tpp(&["search", "--group", "sym:3", "--min-size", "2"]));
    let (summary, results) = records.split_last().unwrap();
    assert_eq!(summary["summary"]["total"], json!(results.len()));
    assert!(!results.is_empty());
    for (i, rec) in results.iter().enumerate() {
        let path = dir.path().join(format!("t{i}.json"));
        std::fs::write(&path, rec.to_string()).unwrap();
        let path = path.to_str().unwrap();
        assert_eq!(stdout_json(&tpp(&["check", "--triple", path]))["tpp"], json!(true));
        let c = stdout_json(&tpp(&["classify", "--triple", path]));
        for key in ["case", "w", "r", "a_st", "a_tu", "a_su"] {
            assert_eq!(c[key], rec[key], "{key} of {rec}");
        }
    }
}

#[test]
fn search_output_is_deterministic_across_workers() {
    let strip = |mut v: Vec<Value>| {
        v.last_mut().unwrap()["summary"].as_object_mut().unwrap().remove("wall_ms");
        v
    };
    let one = strip(lines(&tpp(&["search", "--group", "dih:4", "--workers", "1"])));
    let four = strip(lines(&tpp(&["search", "--group", "dih:4", "--workers", "4"])));
    assert_eq!(one, four);
    let again = strip(lines(&tpp(&["search", "--group", "dih:4", "--workers", "1"])));
    assert_eq!(one, again);
}

#[test]
fn maximal_search_signals_empty_results() {
    let v = lines(&tpp(&["search", "--group", "cyc:4", "--mode", "maximal"]));
    assert_eq!(v.len(), 2);
    assert_eq!(v[0]["mpq"], json!(4));
    assert_eq!(v[1]["summary"]["empty"], json!(false));

    let v = lines(&tpp(&["search", "--group", "cyc:5", "--mode", "maximal", "--min-size", "2"]));
    assert_eq!(v.len(), 1);
    assert_eq!(v[0]["summary"]["empty"], json!(true));
}

#[test]
fn matmul_through_the_group_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    std::fs::write(&a, r#"{"rows":2,"cols":2,"entries":[[1,2],[3,4]]}"#).unwrap();
    std::fs::write(&b, r#"{"rows":2,"cols":2,"entries":[[5,"1/2"],[7,8]]}"#).unwrap();
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let base = [
        "matmul",
        "--group",
        "prod:(cyc:2,cyc:2,cyc:2)",
        "--s",
        "0,4",
        "--t",
        "0,2",
        "--u",
        "0,1",
        "--a",
        a,
        "--b",
        b,
    ];
    let v = stdout_json(&tpp(&base));
    assert_eq!(v["product"]["entries"], json!([[19, "33/2"], [43, "67/2"]]));
    assert_eq!(v["equal"], json!(true));
    assert!(v.get("discarded").is_none());

    let v = stdout_json(&tpp(&[&base[..], &["--diagnostics"]].concat()));
    assert_eq!(v["discarded"].as_array().unwrap().len(), 4);

    // <2,2,2> needs a TPP triple
    let out = tpp(&["matmul", "--group", "cyc:8", "--s", "0,1", "--t", "0,2", "--u", "0,3", "--a", a, "--b", b]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn input_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["check", "--group", "cyc:x", "--s", "0", "--t", "0", "--u", "0"],
        &["check", "--group", "cyc:6", "--s", "0,a", "--t", "0", "--u", "0"],
        &["check", "--group", "cyc:6", "--s", "0,0", "--t", "0", "--u", "0"],
        &["check", "--group", "cyc:6", "--s", "6", "--t", "0", "--u", "0"],
        &["check", "--group", "cyc:6", "--s", "0"],
        &["check", "--triple", "/nonexistent/triple.json"],
        &["bounds", "--sizes", "1,2"],
        &["search", "--group", "cyc:4", "--min-size", "0"],
        &["nonsense"],
        &[],
    ];
    for args in cases {
        let out = tpp(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn matmul_dimension_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    std::fs::write(&a, r#"{"rows":1,"cols":3,"entries":[[1,2,3]]}"#).unwrap();
    let a = a.to_str().unwrap();
    let out = tpp(&[&["matmul"], &CASE_IX[..], &["--a", a, "--b", a, "--unchecked"]].concat());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_guards_exit_3() {
    let out = tpp(&["search", "--group", "cyc:13"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));

    let out = Command::new(env!("CARGO_BIN_EXE_tpp"))
        .args(["group-info", "--group", "sym:4"])
        .env("TPP_ORDER_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));

    let v = lines(&tpp(&["search", "--group", "cyc:13", "--force", "--max-results", "3"]));
    assert_eq!(v.len(), 4);
    assert_eq!(v[3]["summary"]["total"], json!(3));
}
