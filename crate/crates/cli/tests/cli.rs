use std::path::Path;
use std::process::{Command, Output};

fn pointcover(args: &[&str], file: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pointcover")).args(args).arg(file).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const TRIANGLE: &str = r#"{"dimension":2,"family":"line2","k":2,"points":[["0","0"],["1","0"],["0","1/2"]]}"#;

#[test]
fn solve_prints_a_record() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t.json", TRIANGLE);
    let out = pointcover(&["solve", "--witness", "--verify", "--no-timing", "--input"], &f);
    assert_eq!(out.status.code(), Some(0));
    let rec: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rec["decision"], true);
    assert_eq!(rec["verified"], true);
    assert_eq!(rec["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let dup = TRIANGLE.replace(r#"["0","1/2"]"#, r#"["0","0"]"#);
    let f = write(dir.path(), "d.json", &dup);
    assert_eq!(pointcover(&["solve", "--input"], &f).status.code(), Some(2));
    let out = pointcover(&["solve", "--dedup", "--input"], &f);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));

    let f = write(dir.path(), "z.json", &TRIANGLE.replace("1/2", "1/0"));
    assert_eq!(pointcover(&["solve", "--input"], &f).status.code(), Some(2));
    assert_eq!(pointcover(&["solve", "--input"], &dir.path().join("missing.json")).status.code(), Some(2));
}

#[test]
fn oversized_ie_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.json");
    let gen = pointcover(&["gen", "--model", "grid", "--n", "6", "--out"], &f);
    assert!(gen.status.success());
    assert_eq!(pointcover(&["solve", "--algorithm", "ie", "--input"], &f).status.code(), Some(3));
}

#[test]
fn kernelize_writes_an_instance() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.json");
    let gen = pointcover(&["gen", "--model", "on-curves", "--k", "2", "--m", "7", "--seed", "4", "--out"], &f);
    assert!(gen.status.success());
    let out = dir.path().join("kern.json");
    let run = Command::new(env!("CARGO_BIN_EXE_pointcover"))
        .args(["kernelize", "--input"])
        .arg(&f)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert!(run.status.success());
    let kern: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(kern["metadata"]["original_k"], 2);
    assert_eq!(pointcover(&["solve", "--verify", "--input"], &out).status.code(), Some(0));
}
