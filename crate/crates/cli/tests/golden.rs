//! Reports for the catalog compared byte for byte against checked-in
//! files. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::Path;
use std::process::Command;

fn cases() -> Vec<(String, Vec<String>)> {
    let manifest = std::fs::read_to_string("tests/golden/MANIFEST").unwrap();
    manifest
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once('|').unwrap();
            (name.trim().to_string(), args.split_whitespace().map(String::from).collect())
        })
        .collect()
}

fn run(args: &[String]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rinehart")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for (name, args) in cases() {
        let (code, stdout) = run(&args);
        let expected_code = if name.ends_with("-corrupt") { 1 } else { 0 };
        assert_eq!(code, expected_code, "{name}");
        let path = Path::new("tests/golden").join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &stdout).unwrap();
            continue;
        }
        let golden = std::fs::read_to_string(&path).unwrap_or_default();
        if golden != stdout {
            failures.push(name);
        }
    }
    assert!(failures.is_empty(), "reports differ from golden files: {failures:?}");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for (name, args) in cases() {
        assert_eq!(run(&args), run(&args), "{name}");
    }
}
