//! End-to-end tests of the `hoqmc` binary: flag surface, output formats,
//! exit codes, and the direction-number data path.

use std::process::{Command, Output};

fn hoqmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hoqmc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn points_match_the_classic_two_dimensional_sequence() {
    let out = hoqmc(&["points", "--dims", "2", "--alpha", "1", "--m", "3"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "h,x1,x2\n\
         0,0/8,0/8\n\
         1,4/8,4/8\n\
         2,2/8,6/8\n\
         3,6/8,2/8\n\
         4,1/8,5/8\n\
         5,5/8,1/8\n\
         6,3/8,3/8\n\
         7,7/8,7/8\n"
    );
}

#[test]
fn points_print_exact_decimals_on_request() {
    let out = hoqmc(&[
        "points", "--dims", "1", "--alpha", "1", "--m", "2", "--format", "decimal",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "h,x1\n0,0\n1,0.5\n2,0.25\n3,0.75\n");
}

#[test]
fn verify_reports_the_quality_parameter_and_honors_expectations() {
    let args = ["verify", "--dims", "2", "--alpha", "2", "--m", "4"];
    let out = hoqmc(&args);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("inferred quality parameter t: 3"), "got:\n{text}");

    let pass = hoqmc(&[&args[..], &["--expect-t", "3"]].concat());
    assert!(pass.status.success());
    assert!(stdout(&pass).contains("PASS"));

    let fail = hoqmc(&[&args[..], &["--expect-t", "1"]].concat());
    assert_eq!(fail.status.code(), Some(1));
    assert!(stdout(&fail).contains("FAIL"));
}

#[test]
fn dimension_mismatch_is_a_config_error() {
    let out = hoqmc(&["integrate", "--function", "f2", "--dims", "3", "--m", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn oversized_point_requests_hit_the_capacity_guard() {
    let out = hoqmc(&["points", "--dims", "30", "--alpha", "2", "--m", "22"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bounds_emits_the_known_binary_order_two_constants() {
    let out = hoqmc(&["bounds", "--alpha", "2", "--dims", "2"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["C_alpha"], 4.5);
    assert_eq!(report["A_alpha"], 2.5);
    assert_eq!(report["D_alpha"], 0.5);
    assert_eq!(report["U_per_cardinality"].as_array().unwrap().len(), 2);
}

#[test]
fn direction_numbers_load_from_the_data_env_var() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("sobol-direction-numbers.txt"),
        "d s a m_i\n2 1 0 1\n",
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hoqmc"))
        .args(["points", "--dims", "2", "--alpha", "1", "--m", "3"])
        .env("HOQMC_DATA", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    // The two-dimensional prefix of the table is standard, so the points
    // match the bundled file.
    assert!(stdout(&out).contains("3,6/8,2/8"));

    std::fs::write(dir.path().join("sobol-direction-numbers.txt"), "d s a m_i\n2 1\n")
        .unwrap();
    let bad = Command::new(env!("CARGO_BIN_EXE_hoqmc"))
        .args(["points", "--dims", "2", "--alpha", "1", "--m", "3"])
        .env("HOQMC_DATA", dir.path())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn precision_sweep_prepends_the_truncation_column() {
    let out = hoqmc(&[
        "precision",
        "--function",
        "f1",
        "--dims",
        "1",
        "--alpha",
        "3",
        "--m-min",
        "3",
        "--m-max",
        "4",
        "--u",
        "10",
        "--u",
        "52",
        "--no-timing",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,m,N,estimate,abs_error,seconds");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("10,3,8,") && lines[3].starts_with("52,3,8,"));
}

#[test]
fn integrate_emits_a_json_record_with_instrumented_counts() {
    let out = hoqmc(&[
        "integrate",
        "--function",
        "f4",
        "--dims",
        "2",
        "--alpha",
        "2",
        "--m",
        "5",
        "--algorithm",
        "extrapolated-square",
        "--format",
        "json",
        "--no-timing",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let record = &report.as_array().unwrap()[0];
    assert_eq!(record["algorithm"], "extrapolated-square");
    assert_eq!(record["N"], 96);
    assert_eq!(record["evaluations"], 96);
    let err = record["abs_error"].as_f64().unwrap();
    assert!(err > 0.0 && err < 1e-3);
}
