use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn qtanner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtanner")).args(args).output().unwrap()
}

fn report(args: &[&str]) -> Value {
    let out = qtanner(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn z8z2<'a>(extra: &[&'a str], files: &'a [String; 3]) -> Vec<&'a str> {
    let mut v = vec!["--group", &files[0], "--gens-a", &files[1], "--gens-b", &files[2]];
    v.extend_from_slice(extra);
    v
}

#[test]
fn css_on_the_hamming_example() {
    let files = [data("z8z2.group"), data("z8z2_a.gens"), data("z8z2_b.gens")];
    let (ca, cb) = (data("hamming.code"), data("hamming_dual.code"));
    let mut args = vec!["css"];
    args.extend(z8z2(&["--code-a", &ca, "--code-b", &cb, "--trials", "2", "--seed", "3"], &files));
    let r = report(&args);
    assert_eq!(r["report"]["n"], 392);
    assert_eq!(r["report"]["k"], 12);
    assert_eq!(r["config"]["seed"], 3);
    assert_eq!(r["command"], "css");
}

#[test]
fn tnc_violation_is_a_report_not_an_error() {
    let r = report(&[
        "tnc",
        "--group",
        &data("z4z2.group"),
        "--gens-a",
        &data("z4z2_a.gens"),
        "--gens-b",
        &data("overlap_b.gens"),
    ]);
    assert_eq!(r["report"]["tnc"], false);
    assert_eq!(r["report"]["witness"]["tnc"], "violated");
}

#[test]
fn complex_report_for_the_toy_instance() {
    let r = report(&[
        "complex",
        "--group",
        &data("z4z2.group"),
        "--gens-a",
        &data("z4z2_a.gens"),
        "--gens-b",
        &data("z4z2_b.gens"),
    ]);
    assert_eq!(r["report"]["n_squares"], 36);
    assert_eq!(r["report"]["tnc"], true);
}

#[test]
fn robust_verdicts() {
    let r = report(&["robust", "--code-a", "@rep3", "--code-b", "@rep3", "--w", "0"]);
    assert_eq!(r["report"]["robust"], true);
    let r = report(&["robust", "--code-a", "@rep4", "--code-b", "@parity4", "--w", "16", "--p", "1"]);
    assert!(r["report"]["robust"].is_boolean());
    assert!(r["report"]["punctures_checked"].as_u64().unwrap() >= 1);
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "robust-mc", "--degree", "5", "--rho-a", "0.4", "--rho-b", "0.4", "--w", "6", "--trials", "12", "--seed", "9",
    ];
    let a = qtanner(&args);
    let b = qtanner(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["randcode-check", "--r", "2", "--n", "8", "--v-count", "1", "--trials", "5000", "--seed", "1"];
    assert_eq!(qtanner(&args).stdout, qtanner(&args).stdout);
}

#[test]
fn decode_and_test_ltc_on_the_toy_instance() {
    let base = [
        "--group",
        &data("z4z2.group"),
        "--gens-a",
        &data("z4z2_a.gens"),
        "--gens-b",
        &data("z4z2_b.gens"),
        "--code-a",
        "@rep3",
        "--code-b",
        "@rep3",
        "--threshold",
        "100",
    ]
    .map(String::from);
    let mut args: Vec<&str> = vec!["decode", "--trials", "8", "--w", "1"];
    args.extend(base.iter().map(String::as_str));
    let r = report(&args);
    assert_eq!(r["report"]["samples"], 8);
    let mut args: Vec<&str> = vec!["test-ltc", "--trials", "4", "--weights", "1,2"];
    args.extend(base.iter().map(String::as_str));
    let r = report(&args);
    assert_eq!(r["report"]["weight_sweep"], serde_json::json!([1, 2]));
    let zero = "0".repeat(36);
    let mut args: Vec<&str> = vec!["decode", "--word", &zero];
    args.extend(base.iter().map(String::as_str));
    assert_eq!(report(&args)["report"]["outcome"], "decoded");
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("qtanner-cli-test-{}.json", std::process::id()));
    let p = path.display().to_string();
    let out = qtanner(&["robust", "--code-a", "@rep3", "--code-b", "@rep3", "--w", "3", "--out", &p]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("3-robust: true"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"]["robust"], true);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn input_errors_exit_nonzero_with_location() {
    let dir = std::env::temp_dir().join(format!("qtanner-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.code");
    std::fs::write(&bad, "generator\n2 3\n101\n1111\n").unwrap();
    let out = qtanner(&["robust", "--code-a", &bad.display().to_string(), "--code-b", "@rep3", "--w", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("bad.code") && msg.contains("line 4"), "{msg}");
    std::fs::remove_dir_all(dir).unwrap();

    let out = qtanner(&["robust", "--code-a", "@hamming", "--code-b", "@hamming", "--w", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dual-tensor-dimension"));

    let out = qtanner(&["ltc", "--code-a", "@rep3", "--code-b", "@rep3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--group"));
}
