use std::path::Path;
use std::process::{Command, Output};

use aoi::report::{read_file, CompareRow, EngineRow, Format, PmfRow, SweepRow};

fn aoi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aoi")).args(args).output().expect("run aoi")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analytic_writes_pmf_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    for (format, name) in [("csv", "pmf.csv"), ("jsonl", "pmf.jsonl")] {
        let file = dir.path().join(name);
        let out = aoi(&[
            "analytic", "--discipline", "preemptive", "--Y", "geometric:0.5", "--S", "geometric:0.5",
            "--order", "64", "--format", format, "--out", path_str(&file),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let fmt = if format == "csv" { Format::Csv } else { Format::Jsonl };
        let rows: Vec<PmfRow> = read_file(&file, fmt).unwrap();
        assert_eq!(rows.len(), 64);
        assert_eq!(rows[0].n, 1);
        assert_eq!(rows[0].prob, 0.25);
        let summary: Vec<EngineRow> = aoi::report::read_rows(out.stdout.as_slice(), fmt).unwrap();
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].mean, 3.0);
        assert_eq!(summary[0].closed_form_mean, Some(3.0));
    }
}

#[test]
fn nonpreemptive_deterministic_arrivals() {
    let out = aoi(&["analytic", "--discipline", "nonpreemptive", "--Y", "det:1", "--gamma", "0.5", "--out", "/dev/null"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary: Vec<EngineRow> = aoi::report::read_rows(out.stdout.as_slice(), Format::Csv).unwrap();
    assert!((summary[0].mean - 3.0).abs() < 1e-12);
}

#[test]
fn chain_edge_list_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.txt");
    let out = aoi(&[
        "chain", "--discipline", "preemptive", "--Y", "explicit:1,1", "--S", "geometric:0.5", "--nmax", "30",
        "--edges", path_str(&edges), "--out", "/dev/null",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&edges).unwrap();
    assert!(text.lines().count() > 30);
}

#[test]
fn compare_passes_and_fails_on_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cmp.csv");
    let out = aoi(&[
        "compare", "--discipline", "nonpreemptive", "--Y", "geometric:0.5", "--gamma", "0.5", "--slots", "200000",
        "--out", path_str(&file),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows: Vec<CompareRow> = read_file(&file, Format::Csv).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.pass));
    assert!((rows[0].left_mean - 11.0 / 3.0).abs() < 1e-9);

    let out = aoi(&[
        "compare", "--discipline", "preemptive", "--Y", "geometric:0.5", "--S", "geometric:0.5", "--nmax", "5", "--no-sim",
        "--out", "/dev/null",
    ]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    assert!(stderr(&out).contains("tolerance"));
}

#[test]
fn sweep_over_service_rate() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sweep.jsonl");
    let out = aoi(&[
        "sweep", "--discipline", "preemptive", "--Y", "geometric:0.5", "--grid", "gamma=0.1:0.9:0.1", "--with-chain",
        "--nmax", "200", "--format", "jsonl", "--out", path_str(&file),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows: Vec<SweepRow> = read_file(&file, Format::Jsonl).unwrap();
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[4].gamma, Some(0.5));
    assert_eq!(rows[4].mean_analytic, Some(3.0));
    assert!(rows.windows(2).all(|w| w[1].mean_analytic < w[0].mean_analytic));
    for r in &rows {
        assert!((r.mean_analytic.unwrap() - r.mean_chain.unwrap()).abs() < 1e-6);
    }
}

#[test]
fn usage_errors_exit_two() {
    let cases: [&[&str]; 6] = [
        &["analytic", "--discipline", "preemptive", "--Y", "poisson:1", "--S", "geo:0.5"],
        &["analytic", "--discipline", "preemptive", "--Y", "geo:1.5", "--S", "geo:0.5"],
        &["analytic", "--discipline", "nonpreemptive", "--Y", "geo:0.5", "--S", "explicit:1,1"],
        &["sweep", "--discipline", "preemptive", "--Y", "geo:0.5", "--grid", "gamma=0.9:0.1:0.1"],
        &["sweep", "--discipline", "preemptive", "--Y", "geo:0.5", "--grid", "rho=0.1:0.9:0.1"],
        &["sim", "--discipline", "preemptive", "--Y", "geo:0.5", "--S", "geo:0.5", "--gamma", "0.5"],
    ];
    for args in cases {
        let out = aoi(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
    let out = aoi(&["analytic", "--discipline", "nonpreemptive", "--Y", "geo:0.5", "--S", "explicit:1,1"]);
    assert!(stderr(&out).contains("aoi sim"));
}

#[test]
fn nonpreemptive_general_service_runs_on_chain_and_sim() {
    let out = aoi(&[
        "compare", "--discipline", "nonpreemptive", "--Y", "explicit:1,2", "--S", "explicit:1,1", "--nmax", "120",
        "--slots", "200000", "--out", "/dev/null",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}
