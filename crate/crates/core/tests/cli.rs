//! The `ominus` binary: exit codes, JSON shape and determinism.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn ominus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ominus"))
        .args(args)
        .output()
        .expect("spawn ominus")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Every leaf is a string, bool or null; numbers never appear as JSON numbers.
fn no_json_numbers(v: &Value) -> bool {
    match v {
        Value::Number(_) => false,
        Value::Array(xs) => xs.iter().all(no_json_numbers),
        Value::Object(m) => m.values().all(no_json_numbers),
        _ => true,
    }
}

#[test]
fn moments_verify_agrees() {
    let out = ominus(&[
        "moments", "--family", "1", "--sign", "minus", "--n", "1", "--r", "2", "--hmax", "4", "--verify",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert!(no_json_numbers(&doc));
    assert_eq!(doc["agree"], true);
    let rows = doc["h"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|row| row["agree"] == true));
    assert_eq!(doc["modulus"], "0x7");
    assert_eq!(doc["a_param"], "0x2");
    assert_eq!(doc["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn enumerate_example() {
    let out = ominus(&["enumerate", "--n", "2", "--r", "1", "--family", "1", "--sign", "plus"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["size"], "48");
    assert_eq!(doc["trace_distribution"]["0x0"], "28");
    assert_eq!(doc["trace_distribution"]["0x1"], "20");
    assert!(no_json_numbers(&doc));
}

#[test]
fn domain_and_usage_errors_exit_2() {
    let out = ominus(&[
        "moments", "--family", "2", "--sign", "plus", "--n", "2", "--r", "1", "--hmax", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("q >= 4"));
    assert_eq!(ominus(&["field", "--r", "17"]).status.code(), Some(2));
    assert_eq!(ominus(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        ominus(&["field", "--r", "3", "--modulus", "0xzz"]).status.code(),
        Some(2)
    );
}

#[test]
fn corrupted_modulus_fails_verification() {
    let out = ominus(&["verify-all", "--max-r", "3", "--modulus", "3=0xf"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("reducible"), "{text}");
}

#[test]
fn verify_all_small_is_quick_and_passes() {
    let start = Instant::now();
    let out = ominus(&["verify-all", "--max-r", "2"]);
    assert!(start.elapsed() < Duration::from_secs(60));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(no_json_numbers(&json(&out)));
    // r = 1 skips the value-range suite instead of failing
    let out = ominus(&["verify-all", "--max-r", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("skipped"));
}

#[test]
fn output_is_byte_identical_across_workers() {
    let cases: [&[&str]; 3] = [
        &[
            "weights",
            "--family",
            "1",
            "--sign",
            "minus",
            "--n",
            "1",
            "--r",
            "3",
            "--jmax",
            "6",
            "--full",
            "--codewords",
            "--delsarte",
        ],
        &[
            "moments", "--family", "4", "--sign", "minus", "--n", "3", "--r", "3", "--hmax", "5", "--verify",
        ],
        &["verify-all", "--max-r", "3"],
    ];
    for args in cases {
        let one = ominus(&[&["--workers", "1"], args].concat());
        let many = ominus(&[&["--workers", "4"], args].concat());
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, many.stdout, "{args:?}");
    }
}

#[test]
fn output_flag_writes_the_same_document() {
    let path = std::env::temp_dir().join(format!("ominus_cli_{}.json", std::process::id()));
    let args = ["kloos", "--r", "3", "--hmax", "4"];
    let stdout = ominus(&args).stdout;
    let out = ominus(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&path).unwrap();
    let _ = std::fs::remove_file(&path);
    assert_eq!(written, stdout);
}
