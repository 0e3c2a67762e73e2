use std::process::{Command, Output};

use sympolar_bench::{read_csv, BenchRecord, CSV_HEADER};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sympolar-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn check_exit_codes() {
    let ok = bench(&["check"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("0 failed"));

    let bad = bench(&["check", "--sabotage"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL generator/cayley point residual"));
}

#[test]
fn configuration_errors_exit_2() {
    assert_eq!(
        bench(&["sweep", "--n", "10", "--p", "11"]).status.code(),
        Some(2)
    );
    assert_eq!(bench(&["sweep", "--trials", "0"]).status.code(), Some(2));
    assert_eq!(
        bench(&["compare", "--retractions", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bench(&["sweep", "--variant", "pade"]).status.code(),
        Some(2)
    );
    assert_eq!(bench(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_3() {
    let out = bench(&[
        "sweep",
        "--n",
        "6",
        "--p",
        "2",
        "--trials",
        "1",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_to_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = bench(&[
        "sweep",
        "--n",
        "20",
        "--p",
        "2,4",
        "--trials",
        "2",
        "--generator",
        "cayley",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let recs = read_csv(text.as_bytes()).unwrap();
    assert_eq!(recs.len(), 4);
    assert!(recs
        .iter()
        .all(|r| r.n == 20 && r.residual_point.unwrap() < 1e-12));
}

#[test]
fn sweep_json_and_parallel_flags() {
    let seq = bench(&[
        "sweep",
        "--n",
        "16",
        "--p",
        "4",
        "--trials",
        "3",
        "--format",
        "json",
        "--no-parallel",
    ]);
    let par = bench(&[
        "sweep",
        "--n",
        "16",
        "--p",
        "4",
        "--trials",
        "3",
        "--format",
        "json",
        "--parallel",
    ]);
    assert_eq!(seq.status.code(), Some(0));
    let parse = |o: &Output| -> Vec<BenchRecord> {
        let v: Vec<BenchRecord> = serde_json::from_slice(&o.stdout).unwrap();
        v.iter().map(BenchRecord::without_timings).collect()
    };
    assert_eq!(parse(&seq), parse(&par));
}

#[test]
fn compare_rows_per_retraction_and_p() {
    let out = bench(&["compare", "--n", "20", "--p", "2,4", "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = read_csv(out.stdout.as_slice()).unwrap();
    let keys: Vec<(String, usize)> = recs
        .iter()
        .map(|r| (r.retraction_name.clone(), r.p))
        .collect();
    assert_eq!(
        keys,
        vec![
            ("polar-light/cayley".into(), 2),
            ("polar-light/exp".into(), 2),
            ("polar-light/cayley".into(), 4),
            ("polar-light/exp".into(), 4),
        ]
    );
}

#[test]
fn precheck_flag_accepted() {
    let out = bench(&[
        "sweep",
        "--n",
        "12",
        "--p",
        "3",
        "--trials",
        "2",
        "--precheck-domain",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let recs = read_csv(out.stdout.as_slice()).unwrap();
    assert!(recs.iter().all(|r| !r.out_of_domain));
}
