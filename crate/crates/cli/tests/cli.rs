use std::fs;
use std::process::{Command, Output};

use aoi_cli::sweep::SWEEP_COLUMNS;

fn aoi_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aoi-lab"))
        .args(args)
        .env_remove("AOI_WORKERS")
        .output()
        .expect("binary runs")
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let idx = SWEEP_COLUMNS.iter().position(|c| *c == name).unwrap();
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').nth(idx).unwrap().to_string())
        .collect()
}

#[test]
fn sweep_matches_closed_form_at_example_points() {
    let out = aoi_lab(&[
        "sweep",
        "--rho",
        "0.5,1,2",
        "--policy",
        "replacement",
        "--packets",
        "1000000",
        "--no-timestamp",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next().unwrap(), SWEEP_COLUMNS.join(","));
    let analytic = column(&csv, "analytic_avg_age");
    let sim = column(&csv, "sim_avg_age");
    assert_eq!(sim.len(), 3);
    for (a, s) in analytic.iter().zip(&sim) {
        let (a, s): (f64, f64) = (a.parse().unwrap(), s.parse().unwrap());
        assert!((s - a).abs() / a < 0.01, "sim {s} analytic {a}");
    }
}

#[test]
fn sweep_is_byte_identical_without_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for (p, workers) in paths.iter().zip(["1", "2"]) {
        let out = aoi_lab(&[
            "sweep",
            "--rho",
            "0.5:1.5:0.5",
            "--packets",
            "20000",
            "--seed",
            "9",
            "--workers",
            workers,
            "--no-timestamp",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());
    assert_eq!(
        column(std::str::from_utf8(&a).unwrap(), "rho"),
        ["0.5", "0.5", "1", "1", "1.5", "1.5"]
    );
}

#[test]
fn sweep_timestamp_is_a_comment_line() {
    let out = aoi_lab(&["sweep", "--rho", "1", "--packets", "5000"]);
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("# generated"));
    assert_eq!(csv.lines().nth(1).unwrap(), SWEEP_COLUMNS.join(","));
}

#[test]
fn single_passes_at_default_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("trace.csv");
    let out = aoi_lab(&[
        "single",
        "--rho",
        "1",
        "--packets",
        "1000000",
        "--seed",
        "42",
        "--trace-dump",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.contains("avg_age"));
    let trace = fs::read_to_string(&dump).unwrap();
    assert_eq!(
        trace.lines().next().unwrap(),
        "k,gen_time,transmit_done,compute_done,x,y,z,w,s"
    );
    assert_eq!(trace.lines().count(), 1_000_001);
}

#[test]
fn single_undersampled_exits_two() {
    let out = aoi_lab(&[
        "single",
        "--rho",
        "1",
        "--packets",
        "1000",
        "--threshold",
        "0.001",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("tolerance check failed"));
}

#[test]
fn parameter_errors_exit_one() {
    for args in [
        vec!["single", "--mu", "-1"],
        vec!["sweep", "--rho", "2,1"],
        vec!["sweep", "--rho", "0"],
        vec!["single", "--packets", "0"],
        vec!["sweep", "--bogus"],
    ] {
        let out = aoi_lab(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn io_errors_exit_three() {
    let out = aoi_lab(&["single", "--config", "/nonexistent/aoi.conf"]);
    assert_eq!(out.status.code(), Some(3));
    let out = aoi_lab(&[
        "sweep",
        "--rho",
        "1",
        "--packets",
        "2000",
        "--out",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# small run\nrho = 0.5,2\npackets = 4000\nseed = 5\npolicy = replacement\nno_timestamp = true\n").unwrap();
    let out = aoi_lab(&["sweep", "--config", conf.to_str().unwrap(), "--seed", "11"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(column(&csv, "rho"), ["0.5", "2"]);
    assert_eq!(column(&csv, "packets"), ["4000", "4000"]);
    assert_eq!(column(&csv, "seed"), ["11", "12"]);
}

#[test]
fn figure_writes_data_and_script() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("fig.csv");
    let out = aoi_lab(&[
        "figure",
        "--packets",
        "20000",
        "--out",
        data.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(&data).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(
        lines.next().unwrap(),
        "rho,replacement_analytic,replacement_sim,fcfs_sim,asymptote"
    );
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 30);
    assert!(rows.windows(2).all(|w| w[1][1] < w[0][1]));
    assert!(rows.iter().all(|r| r[4] == 2.0 && r[1] > 2.0));
    let script = fs::read_to_string(dir.path().join("fig.csv.gp")).unwrap();
    assert!(script.contains("fig.csv"));
}
