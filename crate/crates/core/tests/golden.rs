use std::process::Command;

use spectral_fm::cli::{batch, Defaults, EXIT_USAGE};

const INPUT: &str = include_str!("golden/in.jsonl");
const EXPECTED: &str = include_str!("golden/out.jsonl");

#[test]
fn library_batch_matches_golden() {
    assert_eq!(INPUT.lines().count(), 10);
    for jobs in [1, 2, 7] {
        let (out, code) = batch(INPUT, &Defaults::default(), jobs);
        assert_eq!(out, EXPECTED, "jobs = {jobs}");
        assert_eq!(code, EXIT_USAGE, "last request names an unknown command");
    }
}

#[test]
fn binary_batch_matches_golden() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/in.jsonl");
    let out = Command::new(env!("CARGO_BIN_EXE_spectral-fm"))
        .args(["--in", path, "--jobs", "4"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), EXPECTED);
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}

#[test]
fn binary_empty_input() {
    let out = Command::new(env!("CARGO_BIN_EXE_spectral-fm"))
        .args(["--in", "/dev/null"])
        .output()
        .unwrap();
    assert!(out.stdout.is_empty());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn binary_run_and_out_flag() {
    let dir = std::env::temp_dir().join(format!("spectral-fm-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("report.json");
    let status = Command::new(env!("CARGO_BIN_EXE_spectral-fm"))
        .args(["--surface", "abelian", "--out"])
        .arg(&target)
        .args(["run", "dimensions", r#"{"r":2,"k":3}"#])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.contains("\"total_dim\":14"), "{text}");
    std::fs::remove_dir_all(dir).unwrap();
}
