//! End-to-end checks of the binary: output shapes, exit codes, and cache
//! behaviour.

use std::path::Path;
use std::process::{Command, Output};

fn qcartan(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcartan"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .env_remove("QCARTAN_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn enumerate_partitions_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcartan(dir.path(), &["enumerate", "--kind", "partitions", "--n", "4"]);
    let doc = stdout_json(&out);
    let expected: serde_json::Value =
        serde_json::from_str("[[4],[3,1],[2,2],[2,1,1],[1,1,1,1]]").unwrap();
    assert_eq!(doc, expected);
}

#[test]
fn glaisher_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcartan(dir.path(), &["glaisher", "--p", "2", "5,5,5,3,1,1,1,1,1,1,1,1,1"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["image"], serde_json::json!([10, 8, 5, 3, 1]));
    assert_eq!(doc["steps"]["1"], 4);
    assert_eq!(doc["steps"]["5"], 1);
}

#[test]
fn habacus_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcartan(dir.path(), &["habacus", "[9,7,3,2]"]);
    let doc = stdout_json(&out);
    assert_eq!(doc["core"], serde_json::json!([3]));
    assert_eq!(doc["quotient"], serde_json::json!([4]));
}

#[test]
fn delta_and_cartan_determinant_agree() {
    let dir = tempfile::tempdir().unwrap();
    let delta = stdout_json(&qcartan(
        dir.path(),
        &["delta", "--p", "2", "--n", "4", "--expand"],
    ));
    let det = stdout_json(&qcartan(
        dir.path(),
        &["cartan", "--p", "2", "--n", "4", "--det"],
    ));
    assert_eq!(delta["expanded"], det["det"]);
}

#[test]
fn snf_of_smallest_cartan() {
    let dir = tempfile::tempdir().unwrap();
    let doc = stdout_json(&qcartan(dir.path(), &["snf", "--p", "2", "--n", "2"]));
    assert_eq!(doc["divisors"], serde_json::json!(["1 + q^2"]));
}

#[test]
fn conjecture_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcartan(dir.path(), &["conjecture", "--p", "2", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["all_equal"], serde_json::json!(true));
    // the hypothesis requires a prime modulus
    let bad = qcartan(dir.path(), &["conjecture", "--p", "4", "--n", "4"]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("prime"));
}

#[test]
fn series_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcartan(dir.path(), &["series-check", "--p", "2", "--order", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["all_pass"], serde_json::json!(true));
}

#[test]
fn verify_exit_codes_and_unknown_statements() {
    let dir = tempfile::tempdir().unwrap();
    let ok = qcartan(dir.path(), &["verify", "cardinality", "--n", "6"]);
    assert_eq!(ok.status.code(), Some(0));
    let unknown = qcartan(dir.path(), &["verify", "thm-0.0"]);
    assert_eq!(unknown.status.code(), Some(3));
    let usage = qcartan(dir.path(), &["verify"]);
    assert_eq!(usage.status.code(), Some(3));
    let listing = qcartan(dir.path(), &["verify", "--list"]);
    assert_eq!(listing.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&listing.stdout).contains("thm-4.1"));
    // the --theorem shorthand reaches the same statement
    let themed = qcartan(dir.path(), &["verify", "--theorem", "7.1", "--dmax", "2"]);
    assert_eq!(themed.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_three_and_help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = qcartan(dir.path(), &["cartan", "--p", "2"]);
    assert_eq!(bad.status.code(), Some(3));
    let help = qcartan(dir.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let bad_partition = qcartan(dir.path(), &["habacus", "not-a-partition"]);
    assert_eq!(bad_partition.status.code(), Some(3));
}

#[test]
fn repeated_invocations_are_byte_identical_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cold = qcartan(dir.path(), &["decomp", "--p", "2", "--n", "6"]);
    assert!(cold.status.success());
    let cache_file = dir.path().join("decomp").join("p2").join("n6.json");
    assert!(cache_file.exists(), "cache file written");
    let warm = qcartan(dir.path(), &["decomp", "--p", "2", "--n", "6"]);
    assert_eq!(cold.stdout, warm.stdout, "cold and warm runs agree byte for byte");

    let first = qcartan(dir.path(), &["cartan", "--p", "2", "--n", "6"]);
    let second = qcartan(dir.path(), &["cartan", "--p", "2", "--n", "6"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn exponent_notation_listing() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcartan(
        dir.path(),
        &["enumerate", "--kind", "class-regular", "--n", "27", "--p", "2", "--exponents"],
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().any(|l| l == "1^9 3 5^3"));
}

#[test]
fn table_mode_renders() {
    let dir = tempfile::tempdir().unwrap();
    let out = qcartan(
        dir.path(),
        &["weights", "--p", "2", "--n", "3", "--which", "g", "--table"],
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("partition"));
    assert!(text.contains("[2]_1"));
}
