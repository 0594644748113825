//! Black-box checks of the command-line interface: exit codes, report
//! shapes, and determinism.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_patcross"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_fixture(dir: &std::path::Path) -> std::path::PathBuf {
    let out = run(&["construct", "fixture"]);
    assert!(out.status.success());
    let path = dir.join("fixture.txt");
    std::fs::write(&path, out.stdout).unwrap();
    path
}

#[test]
fn verify_pass_fail_and_usage() {
    let dir = std::env::temp_dir().join("patcross-cli-verify");
    std::fs::create_dir_all(&dir).unwrap();
    let fixture = write_fixture(&dir);

    let out = run(&["verify", fixture.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["all_pass"], true);
    assert_eq!(doc["params"]["lambda"], 2);

    // a self-succession column fails the class check with exit 1
    let bad = dir.join("selfsucc.txt");
    std::fs::write(&bad, "1 2 3\n1 3 2\n2 1 1\n").unwrap();
    let out = run(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["no_self_succession"], false);

    let out = run(&["verify", dir.join("missing.txt").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn info_matrices() {
    let dir = std::env::temp_dir().join("patcross-cli-info");
    std::fs::create_dir_all(&dir).unwrap();
    let fixture = write_fixture(&dir);
    let f = fixture.to_str().unwrap();

    let out = run(&["info", f, "--matrix", "C11.22", "--periods", "adjusted", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert_eq!(first.split(',').next().unwrap(), "34/7"); // (136/21)·(3/4)

    let out = run(&["info", f, "--matrix", "S", "--format", "csv"]);
    assert!(stdout(&out).starts_with("0,2,2,2"));

    let out = run(&["info", f, "--matrix", "Theta", "--format", "csv"]);
    assert!(stdout(&out).starts_with("3,2,2,2"));

    // JSON output round-trips
    let out = run(&["info", f, "--matrix", "M"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["matrix"], "M");
    assert_eq!(doc["rows"].as_array().unwrap().len(), 2 * 4 + 3);
}

#[test]
fn efficiency_table_and_errors() {
    let out = run(&["efficiency", "--pairs", "table1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 19);
    assert_eq!(lines[0], "p,v,e_star");
    assert_eq!(lines[1], "3,3,0.993103");
    assert!(lines.contains(&"4,13,0.999939"));
    assert!(lines.contains(&"6,11,0.999988"));

    let out = run(&["efficiency", "--p", "6", "--v", "11"]);
    assert!(stdout(&out).contains("6,11,0.999988"));

    let out = run(&["efficiency", "--p", "2", "--v", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_sampled_deterministic() {
    let args = [
        "certify", "--p", "3", "--v", "3", "--t", "2", "--mode", "direct", "--competitors",
        "sample", "--count", "25", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(doc["failures"], 0);
    assert_eq!(doc["tested"].as_u64().unwrap() + doc["skipped_out_of_class"].as_u64().unwrap(), 25);

    let out = run(&[
        "certify", "--p", "3", "--v", "4", "--t", "3", "--mode", "functional", "--competitors",
        "sample", "--count", "10", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["failures"], 0);
    assert!(doc["a_star"].as_str().unwrap().contains("981/17"));
}

#[test]
fn construct_and_average() {
    let out = run(&["construct", "williams", "--v", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("4 4 4\n"));

    let out = run(&["construct", "williams", "--v", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let dir = std::env::temp_dir().join("patcross-cli-average");
    std::fs::create_dir_all(&dir).unwrap();
    let fixture = write_fixture(&dir);
    let out = run(&["average", fixture.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["match"], true);
    assert_eq!(doc["eq32"], true);

    // nonbinary input: closed form still matches brute force, (3.2) n/a
    let nb = dir.join("nonbinary.txt");
    std::fs::write(&nb, "1 2 3\n2 3 1\n1 2 3\n").unwrap();
    let out = run(&["average", nb.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["match"], true);
    assert_eq!(doc["eq32"], serde_json::Value::Null);
}
