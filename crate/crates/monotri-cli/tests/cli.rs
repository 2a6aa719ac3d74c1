//! End-to-end tests of the binary: exit codes, envelope schema, determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monotri"))
        .args(args)
        .env_remove("MONOTRI_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

#[test]
fn count_examples() {
    let out = run(&["hmt", "count", "--rows", "4", "--max", "2", "--bottom", "1,2", "--method", "brute"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("result: 3\n"));

    let out = run(&["mt", "count", "--bottom", "1,2,3"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("result: 7\n"));

    let out = run(&["asm", "count", "--size", "4", "--method", "product"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("result: 42\n"));

    let out = run(&["vsasm", "count", "--size", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("result: 3\n"));
}

#[test]
fn counting_methods_agree_via_crosscheck() {
    for second in ["brute", "recursion", "beta", "gamma-bar"] {
        let out = run(&[
            "hmt", "count", "--rows", "5", "--max", "4", "--bottom", "1,3,4", "--crosscheck",
            second,
        ]);
        assert!(out.status.success(), "crosscheck with {second}");
    }
    let out = run(&["asm", "count", "--size", "4", "--method", "alpha", "--crosscheck", "constant-term"]);
    assert!(out.status.success());
}

#[test]
fn weak_counts_use_product_formula() {
    let out = run(&["hmt", "count", "--rows", "4", "--max", "3", "--bottom", "1,2", "--weak", "--crosscheck", "brute"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("method: product+brute crosscheck"), "{text}");
}

#[test]
fn poly_output_is_canonical() {
    let out = run(&["hmt", "poly", "--rows", "2", "--target", "gamma"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("result: x - k1 + 1\n"));

    let out = run(&["hmt", "poly", "--rows", "3", "--target", "gamma-star"]);
    assert!(out.status.success());
    // 1/2 (2x+1-k1-k2)(k2-k1) expanded in canonical order.
    let text = stdout(&out);
    assert!(text.starts_with("result: "));
    assert!(text.contains("k1") && text.contains("k2"));

    let out = run(&["hmt", "poly", "--rows", "1", "--target", "gamma"]);
    assert!(stdout(&out).starts_with("result: 1\n"));
}

#[test]
fn poly_emission_is_byte_identical_across_runs() {
    let args = ["hmt", "poly", "--rows", "5", "--target", "gamma"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).len() > 1000);
}

#[test]
fn json_envelope_schema() {
    let out = run(&["--format", "json", "asm", "count", "--size", "5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["result"], serde_json::json!("429"));
    assert_eq!(v["method"], serde_json::json!("product"));
    assert!(v["query"].is_object());
    assert!(v["elapsed_ms"].is_number());
    assert!(v["warnings"].is_array());
}

#[test]
fn env_var_selects_format() {
    let out = Command::new(env!("CARGO_BIN_EXE_monotri"))
        .args(["asm", "count", "--size", "3"])
        .env("MONOTRI_FORMAT", "json")
        .output()
        .expect("binary runs");
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["result"], serde_json::json!("7"));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("monotri-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("answer.txt");
    let out = run(&["--output", path.to_str().unwrap(), "asm", "count", "--size", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.starts_with("result: 42\n"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_input_exits_two() {
    // Non-increasing bottom row.
    let out = run(&["hmt", "count", "--rows", "3", "--max", "4", "--bottom", "2,1"]);
    assert_eq!(out.status.code(), Some(2));
    // Entry above the bound.
    let out = run(&["hmt", "count", "--rows", "2", "--max", "2", "--bottom", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown flag value.
    let out = run(&["asm", "count", "--size", "4", "--method", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    // Even size for the symmetric family.
    let out = run(&["vsasm", "count", "--size", "4"]);
    assert_eq!(out.status.code(), Some(2));
    // hmt family without the entry bound.
    let out = run(&["gf", "coeff", "--family", "hmt", "--n", "2", "--exponents", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn size_guards_block_without_override() {
    let out = run(&["asm", "count", "--size", "7", "--method", "enumerate"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["hmt", "poly", "--rows", "10", "--target", "gamma"]);
    assert_eq!(out.status.code(), Some(2));
    // With the override the guard becomes a warning.
    let out = run(&["--unsafe-sizes", "asm", "count", "--size", "7", "--method", "enumerate"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("result: 218348\n"), "{text}");
    assert!(text.contains("warning: size guard"), "{text}");
}

#[test]
fn gf_fixtures_and_warnings() {
    let out = run(&["gf", "coeff", "--family", "mt", "--n", "3", "--exponents", "3,2,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("result: -1\n"));
    assert!(text.contains("warning:"));

    let out = run(&["gf", "coeff", "--family", "hmt", "--n", "2", "--max", "5", "--exponents", "3"]);
    assert!(stdout(&out).starts_with("result: 3\n"));

    let out = run(&["gf", "coeff", "--family", "hmt", "--n", "2", "--max", "5", "--exponents", "7"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("warning: exponents exceed the validity bound"));

    let out = run(&["gf", "coeff", "--family", "asm-ct", "--n", "4"]);
    assert!(stdout(&out).starts_with("result: 42\n"));
}

#[test]
fn verify_small_suite_passes() {
    let out = run(&[
        "--seed", "7", "verify", "--suite", "asm", "--max-rows", "3", "--max-x", "3",
        "--instances", "10",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ok   asm/chain"), "{text}");
    assert!(text.contains("0 failed"), "{text}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "--seed", "9", "verify", "--suite", "symmetry", "--max-rows", "3", "--max-x", "3",
        "--instances", "8",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));

    // JSON envelopes agree except for the timing field.
    let mut ja: serde_json::Value = serde_json::from_str(&stdout(&run(&[
        "--format", "json", "--seed", "9", "verify", "--suite", "symmetry", "--max-rows", "3",
        "--max-x", "3", "--instances", "8",
    ])))
    .unwrap();
    let mut jb: serde_json::Value = serde_json::from_str(&stdout(&run(&[
        "--format", "json", "--seed", "9", "verify", "--suite", "symmetry", "--max-rows", "3",
        "--max-x", "3", "--instances", "8",
    ])))
    .unwrap();
    ja["elapsed_ms"] = serde_json::json!(0);
    jb["elapsed_ms"] = serde_json::json!(0);
    assert_eq!(ja, jb);
}
