//! End-to-end checks of the command-line interface: exit codes, output
//! formats and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn snarkdes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snarkdes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/corpus")
}

#[test]
fn verify_shipped_corpus_exits_zero() {
    let dir = corpus_dir();
    let out = snarkdes(&["verify", dir.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("entry=tietze.k37 status=pass copies=37 violations=0"));
    assert!(stdout.contains("total=356 passed=356 failed=0"));
}

#[test]
fn verify_embedded_when_no_paths() {
    let out = snarkdes(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_fails_on_tampered_entry() {
    let dir = std::env::temp_dir().join(format!("snarkdes-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = "\
entry bad.k37
host complete 37
action a0 shift 1 mod 37 on 0..36
block TIETZE a0 0 1 3 6 2 7 14 23 15 10 22 32
end
";
    let path = dir.join("bad.design");
    std::fs::write(&path, bad).unwrap();
    let out = snarkdes(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("status=fail"), "{stdout}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_empty_file_reports_zero_entries_and_succeeds() {
    let dir = std::env::temp_dir().join(format!("snarkdes-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("empty.design");
    std::fs::write(&path, "# nothing here\n").unwrap();
    let out = snarkdes(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("total=0"), "{stdout}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_json_lines_parse() {
    let out = snarkdes(&["verify", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = 0;
    for line in stdout.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "pass");
        lines += 1;
    }
    assert_eq!(lines, 356);
}

#[test]
fn verify_output_is_deterministic() {
    let a = snarkdes(&["verify", "--jobs", "8"]);
    let b = snarkdes(&["verify", "--jobs", "8"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn admissible_output_format() {
    let out = snarkdes(&["admissible", "22"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.lines().next() == Some("n \u{2261} 1, 22 (mod 33)"),
        "{stdout}"
    );
    let out = snarkdes(&["admissible", "13"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn construct_inadmissible_exits_two() {
    let out = snarkdes(&["construct", "TIETZE", "30"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("inadmissible"), "{err}");
}

#[test]
fn construct_unreachable_exits_three() {
    let out = snarkdes(&["construct", "S1", "340"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unreachable"), "{err}");
}

#[test]
fn construct_writes_verifiable_output() {
    let dir = std::env::temp_dir().join(format!("snarkdes-ctor-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_file = dir.join("k109.design");
    let a = snarkdes(&[
        "construct",
        "TIETZE",
        "109",
        "-o",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let text_a = std::fs::read_to_string(&out_file).unwrap();
    assert!(text_a.contains("action id identity"));
    // the written file verifies
    let v = snarkdes(&["verify", out_file.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
    // byte-identical across runs
    let b = snarkdes(&[
        "construct",
        "TIETZE",
        "109",
        "-o",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(b.status.code(), Some(0));
    let text_b = std::fs::read_to_string(&out_file).unwrap();
    assert_eq!(text_a, text_b);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn catalog_lists_all_graphs() {
    let out = snarkdes(&["catalog"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 42);
    assert!(stdout.contains("name=TIETZE v=12 e=18 girth=3"));
}

#[test]
fn gdd_subcommand_produces_valid_file() {
    let out = snarkdes(&["gdd", "2^3", "4^1", "k=3"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("gdd type 2^3 4^1 k=3"), "{stdout}");
    let unavailable = snarkdes(&["gdd", "9^9", "k=5"]);
    assert_eq!(unavailable.status.code(), Some(3));
}

#[test]
fn search_finds_known_instance() {
    let out = snarkdes(&[
        "search",
        "TIETZE",
        "--host",
        "complete 28",
        "--action",
        "shift 4 mod 28 on 0..27",
        "--blocks",
        "3",
        "--seed",
        "9",
        "--max-steps",
        "2000000",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("block TIETZE a0"), "{stdout}");
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = snarkdes(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}
