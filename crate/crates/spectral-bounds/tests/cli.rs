use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use spectral_bounds::dispatch;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("spectral-bounds").chain(args.iter().copied());
    let code = dispatch(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(text: &str) -> Vec<Value> {
    match serde_json::from_str(text).expect("valid JSON") {
        Value::Array(rows) => rows,
        other => panic!("expected an array, got {other}"),
    }
}

fn suite_file(dir: &tempfile::TempDir, body: &str) -> PathBuf {
    let path = dir.path().join("runs.suite");
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn psi_row_ends_with_bessel_zero_and_eigenvalue() {
    let (code, out, _) = run(&["psi", "--p", "2", "--n", "2"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("p,n,psi_p,lambda1_unit_ball"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert!((row[2] - 2.404825557695773).abs() < 1e-10);
    assert!((row[3] - 2.404825557695773f64.powi(2)).abs() < 1e-9);
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-rhombus"));
    assert_eq!(run(&["--version"]).0, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["psi", "--p", "abc"]).0, 2);
    let (code, _, err) = run(&["compare-bounds", "--domain", "square", "--p", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("FEM μ₁ unavailable for p≠2"), "{err}");
    assert_eq!(run(&["rholder", "--q", "1", "--r", "2"]).0, 2);
    assert_eq!(run(&["bound", "--domain", "rhombus", "--m", "2"]).0, 2);
    assert_eq!(
        run(&["sturm", "--gamma", "0.5", "--beta", "0", "--A", "1"]).0,
        2
    );
}

#[test]
fn verify_rhombus_reports_ratio_above_two() {
    let (code, out, _) = run(&["verify-rhombus", "--m", "8", "--level", "4"]);
    assert_eq!(code, 0);
    let rows = json(&out);
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["r_m"].as_f64().unwrap() > 2.0);
    assert_eq!(rows[0]["sandwich_ok"], Value::Bool(true));
}

#[test]
fn verify_rhombus_fails_on_impossible_tolerance() {
    // A negative tolerance shrinks the sandwich below the FEM accuracy.
    let (code, _, err) = run(&[
        "verify-rhombus",
        "--m",
        "8",
        "--level",
        "3",
        "--tol",
        "-0.5",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("sandwich"));
}

#[test]
fn bound_at_p3_has_main_and_ashbaugh_mercado_only() {
    let (code, out, _) = run(&["bound", "--domain", "rhombus", "--m", "8", "--p", "3"]);
    assert_eq!(code, 0);
    let rows = json(&out);
    let names: Vec<&str> = rows.iter().map(|r| r["bound"].as_str().unwrap()).collect();
    assert_eq!(names, ["main", "ashbaugh_mercado"]);
    assert!(rows[0]["value"].as_f64().unwrap() > rows[1]["value"].as_f64().unwrap());
}

#[test]
fn compare_bounds_square() {
    let (code, out, _) = run(&["compare-bounds", "--domain", "square", "--level", "4"]);
    assert_eq!(code, 0);
    let rows = json(&out);
    for row in &rows {
        assert_eq!(row["valid"], Value::Bool(true), "{row}");
        // Flat objects only.
        assert!(row
            .as_object()
            .unwrap()
            .values()
            .all(|v| !v.is_object() && !v.is_array()));
    }
    let mu = rows[0]["mu1"].as_f64().unwrap();
    assert!((mu - std::f64::consts::PI.powi(2)).abs() < 0.05);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "chiti", "--domain", "rhombus", "--m", "8", "--level", "3", "--format", "csv",
    ];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bounds.csv");
    let (code, out, _) = run(&[
        "bound",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("domain,p,n,k,area,bound,value,applicable\n"));
}

#[test]
fn rholder_and_sturm_rows() {
    let (code, out, _) = run(&["rholder", "--level", "3", "--q", "4", "--r", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)[0]["ok"], Value::Bool(true));
    let (code, out, _) = run(&[
        "sturm", "--gamma", "2", "--beta", "1", "--A", "1", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let row = &json(&out)[0];
    let j = 2.404825557695773f64;
    assert!((row["sigma1"].as_f64().unwrap() - j * j / 4.0).abs() < 1e-4);
}

#[test]
fn mesh_export_parses_back() {
    let (code, out, _) = run(&[
        "mesh",
        "--domain",
        "rhombus",
        "--m",
        "8",
        "--half",
        "--level",
        "2",
        "--values",
        "dirichlet",
    ]);
    assert_eq!(code, 0);
    let (mesh, values) = spectral_bounds::io::parse_mesh(&out).unwrap();
    mesh.validate().unwrap();
    assert_eq!(values.unwrap().len(), mesh.num_nodes());
}

#[test]
fn empty_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = suite_file(&dir, "# nothing to do\n\n");
    let (code, out, _) = run(&["suite", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "0 passed, 0 failed\n");
}

#[test]
fn suite_with_forced_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = suite_file(
        &dir,
        "psi --p 2\nverify-rhombus --m 8 --level 3 --tol -0.5\nsturm --gamma 2 --beta 1 --A 1\n",
    );
    let (code, out, _) = run(&["suite", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let lines: Vec<&str> = out.lines().filter(|l| !l.starts_with("    ")).collect();
    assert_eq!(
        lines,
        [
            "[PASS] psi --p 2",
            "[FAIL exit=1] verify-rhombus --m 8 --level 3 --tol -0.5",
            "[PASS] sturm --gamma 2 --beta 1 --A 1",
            "2 passed, 1 failed",
        ]
    );
}

#[test]
fn unreadable_suite_is_a_usage_error() {
    let (code, _, err) = run(&["suite", "/nonexistent/runs.suite"]);
    assert_eq!(code, 2);
    assert!(err.contains("nonexistent"));
}

#[test]
fn shipped_acceptance_suite_passes() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/suites/acceptance.suite");
    let (code, out, _) = run(&["suite", path]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("15 passed, 0 failed\n"), "{out}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_spectral-bounds");
    let ok = Command::new(bin)
        .args(["psi", "--p", "3", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("p,n,psi_p,lambda1_unit_ball\n3.0,2,"));
    let bad = Command::new(bin)
        .args(["compare-bounds", "--p", "3"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
