//! End-to-end tests of the `erkn` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use erkn_cli::{read_csv_rows, CSV_HEADER, SUMMARY_HEADER};

fn erkn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_erkn"))
        .args(args)
        .output()
        .expect("spawn erkn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let o = erkn(&[
        "run",
        "--method",
        "ERKN2",
        "--problem",
        "fpu",
        "--m",
        "3",
        "--omega",
        "50",
        "--h",
        "0.1",
        "--t-end",
        "1000",
        "--stride",
        "100",
        "--output",
        path_str(&csv),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.next(), Some("0,2.0012000799999998,1,0,0"));
    // steps 0, 100, ..., 10000
    assert_eq!(text.lines().count(), 1 + 101);
    assert!(!text.contains('\r'));
    assert!(stdout(&o).contains("max_dH"));
}

#[test]
fn unknown_method_is_a_usage_error() {
    let o = erkn(&["run", "--method", "NOPE", "--t-end", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for name in ["ERKN1", "ERKN6", "trig:ERKN2"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn unknown_problem_and_bad_flags_are_usage_errors() {
    assert_eq!(
        erkn(&["run", "--problem", "kepler", "--t-end", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(erkn(&["run", "--h", "-1"]).status.code(), Some(2));
    assert_eq!(erkn(&["run", "--stride", "0", "--t-end", "1"]).status.code(), Some(2));
    assert_eq!(erkn(&["run", "--preset", "fig9"]).status.code(), Some(2));
    assert_eq!(erkn(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn linear_problem_to_stdout() {
    let o = erkn(&[
        "run",
        "--method",
        "ERKN2",
        "--problem",
        "linear",
        "--omega",
        "50",
        "--h",
        "0.1",
        "--t-end",
        "10",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    assert!(rows.iter().all(|r| r[3].abs() <= 1e-12));
    // with the CSV on stdout the summary moves to stderr
    assert!(stderr(&o).contains("max_dH"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let o = erkn(&["run", "--t-end", "1", "--output", path_str(&target)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn check_reports_match_the_coefficient_table() {
    let o = erkn(&["check", "ERKN2", "--h", "0.1", "--omega", "50", "--c", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for needle in [
        "symmetric: pass",
        "symplectic: pass (d1 = 1,",
        "upsilon: available (at h*omega: 1)",
        "N = 4",
        "sigma(0): 1\n",
        "sigma(h*omega): 1\n",
        "sigma bound [0.1, 10]: pass",
    ] {
        assert!(out.contains(needle), "missing {needle:?} in\n{out}");
    }

    let out = stdout(&erkn(&["check", "ERKN1", "--h", "0.1", "--omega", "50"]));
    assert!(
        out.contains("symmetric: fail") && out.contains("symplectic: fail"),
        "{out}"
    );
    assert!(out.contains("upsilon: unavailable (InconsistentFilter"), "{out}");

    let out = stdout(&erkn(&["check", "ERKN5", "--h", "0.1", "--omega", "50"]));
    assert!(out.contains("symmetric: fail"), "{out}");
    assert!(out.contains("symplectic: pass (d1 = 1,"), "{out}");
    assert!(out.contains("upsilon: unavailable (NonSymmetricMethod"), "{out}");

    assert_eq!(erkn(&["check", "NOPE"]).status.code(), Some(2));
}

#[test]
fn check_with_resonant_coefficients_is_still_informational() {
    // h*omega = π zeroes b1 = cos(ν/2) of ERKN2, so σ is undefined there
    let omega = format!("{}", std::f64::consts::PI / 0.1);
    let o = erkn(&["check", "ERKN2", "--h", "0.1", "--omega", &omega]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("sigma(h*omega): undefined (ZeroCoefficient)"), "{out}");
    assert!(out.contains("sigma bound [0.1, 10]: fail"), "{out}");
}

#[test]
fn sweep_writes_one_file_per_combination() {
    let dir = tempfile::tempdir().unwrap();
    let o = erkn(&[
        "sweep",
        "--methods",
        "ERKN2,trig:ERKN3",
        "--omegas",
        "50,200",
        "--hs",
        "0.1,0.05",
        "--t-end",
        "5",
        "--stride",
        "10",
        "--out-dir",
        path_str(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], SUMMARY_HEADER);
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(lines[1].starts_with("ERKN2,50,0.1,"));
    assert!(lines[8].starts_with("trig:ERKN3,200,0.05,"));
    for name in ["ERKN2_w50_h0.1.csv", "ERKN2_w200_h0.05.csv", "trig-ERKN3_w50_h0.1.csv"] {
        let rows = read_csv_rows(&dir.path().join(name)).unwrap();
        assert!(!rows.is_empty(), "{name}");
    }
}

#[test]
fn single_combination_sweep_equals_run() {
    let dir = tempfile::tempdir().unwrap();
    let run_csv = dir.path().join("run.csv");
    let sweep_dir = dir.path().join("sweep");
    let common = ["--t-end", "20", "--stride", "3"];
    let mut run_args = vec![
        "run",
        "--method",
        "ERKN4",
        "--omega",
        "200",
        "--h",
        "0.1",
        "--output",
        path_str(&run_csv),
    ];
    run_args.extend(common);
    assert!(erkn(&run_args).status.success());
    let mut sweep_args = vec![
        "sweep",
        "--methods",
        "ERKN4",
        "--omegas",
        "200",
        "--hs",
        "0.1",
        "--out-dir",
        path_str(&sweep_dir),
    ];
    sweep_args.extend(common);
    assert!(erkn(&sweep_args).status.success());
    assert_eq!(
        fs::read(&run_csv).unwrap(),
        fs::read(sweep_dir.join("ERKN4_w200_h0.1.csv")).unwrap()
    );
}

#[test]
fn sweep_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = path_str(dir.path());
    assert_eq!(erkn(&["sweep", "--methods", "", "--out-dir", d]).status.code(), Some(2));
    assert_eq!(erkn(&["sweep", "--out-dir", d]).status.code(), Some(2));
    assert_eq!(
        erkn(&["sweep", "--methods", "ERKN2,NOPE", "--out-dir", d])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        erkn(&["sweep", "--methods", "ERKN2,ERKN2", "--out-dir", d])
            .status
            .code(),
        Some(2)
    );
    // nothing was run
    assert!(!dir.path().join("summary.csv").exists());
}

#[test]
fn sweep_output_is_independent_of_scheduling() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str, threads: &str| {
        let out = dir.path().join(sub);
        let o = Command::new(env!("CARGO_BIN_EXE_erkn"))
            .env("RAYON_NUM_THREADS", threads)
            .args([
                "sweep",
                "--methods",
                "ERKN1,ERKN2,ERKN6",
                "--omegas",
                "50,200",
                "--t-end",
                "10",
            ])
            .args(["--out-dir", path_str(&out)])
            .output()
            .unwrap();
        assert!(o.status.success());
        out
    };
    let a = run("serial", "1");
    let b = run("parallel", "4");
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 7);
    for name in names {
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap(),
            "{name:?}"
        );
    }
}

#[test]
fn preset_runs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig2.csv");
    let o = erkn(&["run", "--preset", "fig2", "--t-end", "1", "--output", path_str(&csv)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("omega = 200") && out.contains("h: 0.1"), "{out}");
}

#[test]
fn blow_up_exits_4_with_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let o = erkn(&[
        "run",
        "--method",
        "ERKN1",
        "--preset",
        "fig2",
        "--stride",
        "1000",
        "--output",
        path_str(&csv),
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let rows = read_csv_rows(&csv).unwrap();
    // samples at steps 0, 1000, ..., 9000 precede the overflow
    assert!(!rows.is_empty() && rows.len() < 11, "{} rows", rows.len());
    assert!(rows.iter().flatten().all(|x| x.is_finite()));
    assert!(stdout(&o).contains("blow-up"));

    let sweep_dir = dir.path().join("sweep");
    let o = erkn(&[
        "sweep",
        "--methods",
        "ERKN1",
        "--omegas",
        "50,200",
        "--stride",
        "1000",
        "--out-dir",
        path_str(&sweep_dir),
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    let summary = fs::read_to_string(sweep_dir.join("summary.csv")).unwrap();
    assert!(summary.contains("ERKN1,200,0.1,inf,inf,inf,inf\n"), "{summary}");
    assert!(!summary.lines().nth(1).unwrap().contains("inf"), "{summary}");
}
