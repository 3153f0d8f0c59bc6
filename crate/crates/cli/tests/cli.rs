//! End-to-end exercises of the command-line surface on the cheap paths.

use std::path::PathBuf;
use std::process::Command;

fn cy3() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cy3"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cy3-cli-{}-{}", name, std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn construct_then_betti_round_trip() {
    let dir = tmpdir("roundtrip");
    let ideal = dir.join("deg17km.txt");
    let out = cy3()
        .args(["construct", "deg17km", "--prime", "101", "--seed", "7", "-o"])
        .arg(&ideal)
        .output()
        .unwrap();
    assert!(out.status.success(), "construct failed: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&ideal).unwrap();
    assert!(text.starts_with("ring p=101 n=8\n"));
    assert!(text.contains("# cy3 construct deg17km --prime 101 --seed 7"), "provenance block");
    assert!(text.trim_end().lines().last().unwrap().starts_with('#'), "ends with comments");

    let betti_json = dir.join("deg17km.betti");
    let out = cy3().arg("betti").arg(&ideal).arg("--json").arg(&betti_json).output().unwrap();
    assert!(out.status.success());
    let table = String::from_utf8_lossy(&out.stdout);
    assert!(table.contains("12"), "middle rank visible in the table:\n{}", table);
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&betti_json).unwrap()).unwrap();
    assert_eq!(parsed["0,0"], 1);
    assert_eq!(parsed["2,4"], 12);
}

#[test]
fn hilbert_reports_cy_invariants() {
    let dir = tmpdir("hilbert");
    let ideal = dir.join("deg15.txt");
    assert!(cy3()
        .args(["construct", "deg15", "--seed", "1", "-o"])
        .arg(&ideal)
        .status()
        .unwrap()
        .success());
    let out = cy3().arg("hilbert").arg(&ideal).output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("5/2*t^3+11/2*t"), "{}", stdout);
    assert!(stdout.contains("d = 15, c2.H = 66, linearly normal: true"), "{}", stdout);
}

#[test]
fn verify_complex_prints_ok_lines() {
    let out = cy3()
        .args(["verify-complex", "--family", "km", "--preset", "deg17km", "--seed", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(
        stdout.trim(),
        "compositions zero: OK; homogeneous: OK; quasi-self-dual (g4=-8): OK"
    );
    // the all-zero twist pattern at tau = 3
    let out = cy3()
        .args(["verify-complex", "--family", "km", "--preset", "zero", "--tau", "3", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn distinguish_betti_files() {
    let dir = tmpdir("distinguish");
    let a = dir.join("a.betti");
    let b = dir.join("b.betti");
    std::fs::write(&a, r#"{"0,0":1,"1,2":1,"1,4":14}"#).unwrap();
    std::fs::write(&b, r#"{"0,0":1,"1,3":7,"2,4":7,"3,7":1}"#).unwrap();
    let out = cy3().arg("distinguish").arg(&a).arg(&b).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("not deformation equivalent"));
    // equal tables: verdict failure, exit 2
    let out = cy3().arg("distinguish").arg(&b).arg(&b).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("indeterminate"));
}

#[test]
fn malformed_ideal_file_diagnostics() {
    let dir = tmpdir("diagnostics");
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "ring p=101 n=2\nx0 + $\n").unwrap();
    let out = cy3().arg("hilbert").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{}", err);
    // unknown preset
    let out = cy3().args(["construct", "deg99", "-o", "/dev/null"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn budget_exceeded_exits_3() {
    let out = cy3()
        .args(["construct", "deg20gn", "--seed", "1", "--budget-steps", "5", "-o", "/dev/null"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
