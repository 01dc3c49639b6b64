use std::path::Path;
use std::process::{Command, Output};

fn logicinf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logicinf")).args(args).output().expect("binary runs")
}

fn generate_small(dir: &Path, extra: &[&str]) -> Output {
    let out = dir.to_str().unwrap();
    let mut args = vec!["generate", "--num-problems", "60", "--num-examples", "600", "--seed", "3", "--out", out];
    args.extend_from_slice(extra);
    logicinf(&args)
}

#[test]
fn generate_then_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out = generate_small(dir.path(), &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("examples per type"));
    for name in ["iid_train.jsonl", "iid_test.jsonl", "iid_stats.json"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    let train = dir.path().join("iid_train.jsonl");
    let v = logicinf(&["validate", "--in", train.to_str().unwrap()]);
    assert!(v.status.success(), "{}", String::from_utf8_lossy(&v.stdout));

    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("iid_stats.json")).unwrap()).unwrap();
    assert_eq!(stats["problems"], 60);
}

#[test]
fn validate_rejects_a_flipped_answer() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_small(dir.path(), &[]).status.success());
    let path = dir.path().join("iid_train.jsonl");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let i = lines
        .iter()
        .position(|l| l.contains("\"output\":\"Yes, via the following inference chain."))
        .expect("a proof example");
    lines[i] = lines[i].replacen("\"output\":\"Yes, via", "\"output\":\"No, we can see why via", 1);
    let bad = dir.path().join("bad.jsonl");
    std::fs::write(&bad, lines.join("\n")).unwrap();
    let v = logicinf(&["validate", "--in", bad.to_str().unwrap()]);
    assert!(!v.status.success());
}

#[test]
fn tsv_and_ood() {
    let dir = tempfile::tempdir().unwrap();
    let out = generate_small(dir.path(), &["--split", "ood", "--format", "tsv", "--answer-position", "end"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let train = std::fs::read_to_string(dir.path().join("ood_train.tsv")).unwrap();
    assert!(train.lines().all(|l| l.split('\t').count() == 2));
}

#[test]
fn stats_json() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_small(dir.path(), &[]).status.success());
    let path = dir.path().join("iid_test.jsonl");
    let out = logicinf(&["stats", "--in", path.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn rules_list() {
    let out = logicinf(&["rules", "list"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("modus ponens"));
    assert!(stdout.trim_end().ends_with("66 rules"));
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!generate_small(dir.path(), &["--type-weights", "0.5,0.5"]).status.success());
    assert!(!generate_small(dir.path(), &["--chain-dist", "0.5,0.6"]).status.success());
    assert!(!generate_small(dir.path(), &["--split", "sideways"]).status.success());
}
