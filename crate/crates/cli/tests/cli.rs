use std::path::Path;
use std::process::{Command, Output};

fn subdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_problem(dir: &Path, json: &str) -> String {
    let path = dir.join("problem.json");
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

const SINGLE_MODE: &str = r#"{"alpha": 0.75, "T": 1.0, "n_time": 16, "L": 3.141592653589793,
    "M": 2, "g_coeffs": [1.0, 0.0], "forcing": "zero"}"#;

#[test]
fn ml_table_has_config_header_and_rows() {
    let out = subdiff(&["ml", "--alpha", "1", "--z", "0,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config: {"));
    assert_eq!(lines[1], "z,value,status");
    let e: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
    assert!((e - std::f64::consts::E).abs() < 1e-14);
}

#[test]
fn exit_codes_separate_validation_from_numerical_failure() {
    assert_eq!(
        subdiff(&["ml", "--alpha", "3", "--z", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        subdiff(&["ml", "--alpha", "0.05", "--z", "50"])
            .status
            .code(),
        Some(3)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = write_problem(dir.path(), r#"{"alpha": 1.5}"#);
    assert_eq!(
        subdiff(&["solve", "--problem", &bad]).status.code(),
        Some(2)
    );
    let good = write_problem(dir.path(), SINGLE_MODE);
    let unwritable = dir.path().join("missing").join("out.csv");
    let out = subdiff(&[
        "solve",
        "--problem",
        &good,
        "--out",
        unwritable.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn solve_writes_the_requested_file_with_norm_notes() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), SINGLE_MODE);
    let out_path = dir.path().join("solve.csv");
    let out = subdiff(&[
        "solve",
        "--problem",
        &problem,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(out_path).unwrap();
    assert_eq!(text.lines().nth(1), Some("t,k,d_k"));
    // 17 nodes × 2 modes
    assert_eq!(
        text.lines().filter(|l| !l.starts_with('#')).count(),
        1 + 17 * 2
    );
    assert!(text.contains("# norm_L2_H1 = "));
    assert!(text.contains("# norm_Halpha_Hminus1 = "));
}

#[test]
fn seeded_studies_are_byte_identical() {
    let args = [
        "stability-study",
        "--alpha",
        "0.75",
        "--trials",
        "2",
        "--seed",
        "3",
        "--modes",
        "4",
        "--grid",
        "16",
    ];
    let a = subdiff(&args);
    let b = subdiff(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8(a.stdout)
        .unwrap()
        .contains("# max ratio alpha = 0.75"));
}

#[test]
fn convergence_reports_a_monotone_single_mode_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let problem = write_problem(dir.path(), SINGLE_MODE);
    let out = subdiff(&["convergence", "--problem", &problem, "--refinements", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# monotone = true"), "{text}");
}
