//! End-to-end tests driving the compiled `tls-cond` binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tls-cond"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tls-cond-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// 3x2 system with an exact rank-one residual structure; generic.
const A_3X2: &str = "3 2\n1 0\n0 1\n0 0\n";
const B_3: &str = "3 1\n1\n1\n0.5\n";

#[test]
fn solve_reports_solution_and_residual() {
    let a = write_temp("a.txt", A_3X2);
    let b = write_temp("b.txt", B_3);
    let out = bin()
        .args(["solve", "--a"])
        .arg(&a)
        .arg("--b")
        .arg(&b)
        .output()
        .unwrap();
    let text = stdout(&out);
    assert!(text.contains("\"x\""), "missing solution: {text}");
    assert!(text.contains("\"lambda_n1\""), "missing eigenvalue: {text}");
}

#[test]
fn cond_methods_agree_through_the_cli() {
    let a = write_temp("a2.txt", A_3X2);
    let b = write_temp("b2.txt", B_3);
    let mut values = Vec::new();
    for method in ["svd", "closed", "power", "oracle"] {
        let out = bin()
            .args(["cond", "--method", method, "--a"])
            .arg(&a)
            .arg("--b")
            .arg(&b)
            .output()
            .unwrap();
        let text = stdout(&out);
        let k = text
            .split("\"K\":")
            .nth(1)
            .and_then(|s| s.split([',', '}']).next())
            .and_then(|s| s.trim().parse::<f64>().ok())
            .unwrap_or_else(|| panic!("no K in output: {text}"));
        values.push(k);
    }
    let k0 = values[0];
    for &k in &values[1..] {
        assert!((k - k0).abs() <= 1e-6 * k0.abs(), "methods disagree: {values:?}");
    }
}

#[test]
fn cond_with_canonical_observation_and_csv() {
    let a = write_temp("a3.txt", A_3X2);
    let b = write_temp("b3.txt", B_3);
    let out = bin()
        .args(["cond", "--l", "e:1", "--format", "csv", "--relative", "--a"])
        .arg(&a)
        .arg("--b")
        .arg(&b)
        .output()
        .unwrap();
    let text = stdout(&out);
    assert!(text.lines().count() >= 2, "expected csv header + row: {text}");
    assert!(text.starts_with("K,K_rel,"), "unexpected csv header: {text}");
}

#[test]
fn cond_with_observation_matrix_from_file() {
    let a = write_temp("a4.txt", A_3X2);
    let b = write_temp("b4.txt", B_3);
    let l = write_temp("l4.txt", "2 1\n1\n1\n");
    let out = bin()
        .args(["cond", "--a"])
        .arg(&a)
        .arg("--b")
        .arg(&b)
        .arg("--l")
        .arg(format!("file:{}", l.display()))
        .output()
        .unwrap();
    assert!(stdout(&out).contains("\"K\""));
}

#[test]
fn nongeneric_input_exits_with_code_2() {
    // b orthogonal to the column space with a repeated singular value:
    // sigma'_n equals sigma_{n+1}, so the problem has no generic solution.
    let a = write_temp("a5.txt", "3 1\n1\n0\n0\n");
    let b = write_temp("b5.txt", "3 1\n0\n1\n0\n");
    let out = bin()
        .args(["solve", "--a"])
        .arg(&a)
        .arg("--b")
        .arg(&b)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn malformed_matrix_exits_with_code_1() {
    let a = write_temp("a6.txt", "2 2\n1 2\n3\n");
    let b = write_temp("b6.txt", "2 1\n1\n1\n");
    let out = bin()
        .args(["solve", "--a"])
        .arg(&a)
        .arg("--b")
        .arg(&b)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn table1_csv_has_four_rows() {
    let out = bin()
        .args(["table1", "--m", "40", "--n", "8", "--format", "csv"])
        .output()
        .unwrap();
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5, "header + 4 rows expected: {text}");
    assert!(lines[0].starts_with("gap,"));
}

#[test]
fn table2_json_lines_reproduce_known_value() {
    let out = bin()
        .args(["table2", "--m-list", "50", "--pert", "1e-10"])
        .output()
        .unwrap();
    let text = stdout(&out);
    let k_rel = text
        .split("\"K_rel\":")
        .nth(1)
        .and_then(|s| s.split([',', '}']).next())
        .and_then(|s| s.trim().parse::<f64>().ok())
        .unwrap();
    assert!((k_rel - 5.05e1).abs() / 5.05e1 <= 0.02, "K_rel = {k_rel}");
}
