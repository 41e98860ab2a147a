//! End-to-end tests of the batch driver: exit codes, report determinism,
//! and the bundled spec files.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liepseudo"))
}

fn spec(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("specs")
        .join(name)
}

#[test]
fn validate_passes_on_bundled_specs() {
    for name in [
        "abelian2.alg",
        "frobenius2.alg",
        "frobenius2_chi.alg",
        "abelian4.alg",
        "frobenius4.alg",
    ] {
        let out = bin()
            .args(["validate", "--spec"])
            .arg(spec(name))
            .output()
            .unwrap();
        assert!(out.status.success(), "{name}: {out:?}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("summary = PASS"), "{name}: {text}");
    }
}

#[test]
fn parse_error_exits_with_code_two() {
    let dir = std::env::temp_dir().join("liepseudo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.alg");
    std::fs::write(&bad, "dim = ").unwrap();
    let out = bin().args(["validate", "--spec"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // and a missing file is a parse-level failure too
    let out = bin()
        .args(["validate", "--spec"])
        .arg(dir.join("nope.alg"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verification_failure_exits_with_code_three_and_prints_witness() {
    let dir = std::env::temp_dir().join("liepseudo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("nonjacobi.alg");
    std::fs::write(
        &bad,
        "dim = 4\nbrackets = [(1,2,3,1), (1,3,2,-1), (2,3,2,1)]\nchi = [0,0,0,0]\nomega = [(1,2,1),(3,4,1)]\n",
    )
    .unwrap();
    let out = bin().args(["validate", "--spec"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("check FAIL spec Jacobi identity | triple"), "{text}");
}

#[test]
fn singular_report_is_deterministic() {
    let run = || {
        let out = bin()
            .args(["singular", "--sp-rep", "pi:1", "--lambda", "1", "--spec"])
            .arg(spec("frobenius2.alg"))
            .output()
            .unwrap();
        assert!(out.status.success(), "{out:?}");
        String::from_utf8(out.stdout).unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "reports must be byte-identical across runs");
    assert!(a.contains("check PASS singular classification"));
    assert!(a.contains("check PASS degree-two vectors deform"));
}

#[test]
fn report_file_matches_stdout() {
    let dir = std::env::temp_dir().join("liepseudo-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let outfile = dir.join("report.txt");
    let out = bin()
        .args(["axioms", "--out"])
        .arg(&outfile)
        .args(["--spec"])
        .arg(spec("abelian2.alg"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let file = std::fs::read_to_string(&outfile).unwrap();
    assert_eq!(stdout, file);
}

#[test]
fn golden_report_is_reproduced() {
    // run from the package root so the spec path in the report is stable
    let out = bin()
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(["axioms", "--spec", "specs/abelian2.alg"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let got = String::from_utf8(out.stdout).unwrap();
    let golden = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/axioms_abelian2.txt"),
    )
    .unwrap();
    assert_eq!(got, golden, "report drifted from the golden file");
}

#[test]
fn lattice_command_reconstructs_the_chain() {
    let out = bin()
        .args(["lattice", "--sp-rep", "pi:1", "--degree-cap", "4", "--spec"])
        .arg(spec("frobenius2_chi.alg"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("lattice (middle-fiber pi_1)"), "{text}");
    assert!(text.contains("summary = PASS"), "{text}");
}
