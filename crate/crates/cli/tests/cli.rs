use std::path::Path;
use std::process::Command;

use duffing_cli::output::{parse_plot_data, parse_trajectory_csv};

fn duffing(args: &[&str]) -> i32 {
    let out = Command::new(env!("CARGO_BIN_EXE_duffing"))
        .args(args)
        .output()
        .expect("binary runs");
    out.status.code().expect("exit code")
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn short_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let code = duffing(&[
        "run",
        "--t-end",
        "20",
        "--record-stride",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let rows = parse_trajectory_csv(&read(&out.join("trajectory.csv"))).unwrap();
    assert_eq!(rows.len(), 401);
    assert_eq!(rows[0].sample.state.x, 2.0);
    assert_eq!(rows[400].sample.t, 20.0);
    assert!(read(&out.join("ledger.csv")).starts_with("t,E,modified_E"));
    let report = read(&out.join("report.txt"));
    assert!(report.contains("check.ledger=PASS"));
    assert!(report.ends_with("status=PASS\n"));
}

#[test]
fn baseline_run_passes_all_checks() {
    let dir = tempfile::tempdir().unwrap();
    let code = duffing(&[
        "run",
        "--p",
        "3",
        "--mu",
        "1",
        "--alpha",
        "1",
        "--x0",
        "2",
        "--y0",
        "0",
        "--dt",
        "0.01",
        "--t-end",
        "5000",
        "--checks",
        "all",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{}", read(&dir.path().join("report.txt")));
}

#[test]
fn config_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# cubic, strong damping\np=3\nmu=10\nt_end=30\n").unwrap();
    let out = dir.path().join("o");
    let code = duffing(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--mu",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(read(&out.join("report.txt")).contains("mu=2\n"));
}

#[test]
fn configuration_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        duffing(&["run", "--mu", "0", "--checks", "inequality", "--out", out]),
        3
    );
    assert_eq!(duffing(&["run", "--p", "4", "--out", out]), 3);
    assert_eq!(duffing(&["run", "--dt", "-1", "--out", out]), 3);
    assert_eq!(duffing(&["run", "--bogus"]), 3);
    assert_eq!(duffing(&["run", "--config", "/nonexistent/cfg"]), 3);
    assert_eq!(duffing(&["frobnicate"]), 3);
    assert_eq!(duffing(&["--help"]), 0);
}

#[test]
fn failed_check_exits_1() {
    // undamped energy does not decay
    let dir = tempfile::tempdir().unwrap();
    let code = duffing(&[
        "run",
        "--mu",
        "0",
        "--t-end",
        "100",
        "--checks",
        "ledger,energy-decay",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    let report = read(&dir.path().join("report.txt"));
    assert!(report.contains("check.ledger=PASS"));
    assert!(report.contains("check.energy-decay=FAIL"));
}

#[test]
fn integration_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let code = duffing(&[
        "run",
        "--p",
        "7",
        "--x0",
        "1e60",
        "--t-end",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn single_point_sweep_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let run_out = dir.path().join("run");
    let sweep_out = dir.path().join("sweep");
    let common = ["--p", "5", "--mu", "0.5", "--alpha", "2", "--t-end", "50"];
    let mut run_args = vec!["run"];
    run_args.extend(common);
    run_args.extend(["--out", run_out.to_str().unwrap()]);
    assert_eq!(duffing(&run_args), 0);
    let mut sweep_args = vec!["sweep"];
    sweep_args.extend(common);
    sweep_args.extend(["--out", sweep_out.to_str().unwrap()]);
    assert_eq!(duffing(&sweep_args), 0);
    let point = sweep_out.join("points").join("p5_alpha2_mu0.5");
    for file in ["trajectory.csv", "ledger.csv", "report.txt"] {
        assert_eq!(read(&run_out.join(file)), read(&point.join(file)), "{file}");
    }
}

#[test]
fn sweep_is_independent_of_parallelism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let grid = [
        "--p", "3,5", "--alpha", "1,100", "--mu", "0,1,10", "--t-end", "40",
    ];
    for (out, jobs) in [(&a, "1"), (&b, "4")] {
        let mut args = vec!["sweep"];
        args.extend(grid);
        args.extend(["--jobs", jobs, "--out", out.to_str().unwrap()]);
        duffing(&args);
    }
    let mut files = Vec::new();
    for entry in walk(&a) {
        let rel = entry.strip_prefix(&a).unwrap().to_path_buf();
        files.push(rel);
    }
    assert!(files.len() > 12 * 3);
    for rel in files {
        assert_eq!(
            read(&a.join(&rel)),
            read(&b.join(&rel)),
            "{}",
            rel.display()
        );
    }
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            out.extend(walk(&path));
        } else {
            out.push(path);
        }
    }
    out.sort();
    out
}

#[test]
fn invalid_grid_point_is_isolated() {
    let dir = tempfile::tempdir().unwrap();
    let code = duffing(&[
        "sweep",
        "--p",
        "3,4",
        "--alpha",
        "1",
        "--mu",
        "1",
        "--t-end",
        "20",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_ne!(code, 0);
    assert!(dir
        .path()
        .join("points/p3_alpha1_mu1/trajectory.csv")
        .exists());
    assert!(!dir.path().join("points/p4_alpha1_mu1").exists());
    let comparison = read(&dir.path().join("comparison.txt"));
    assert!(comparison.contains("INVALID p4_alpha1_mu1"));
}

#[test]
fn sweep_plot_data_has_one_column_per_mu() {
    let dir = tempfile::tempdir().unwrap();
    duffing(&[
        "sweep",
        "--p",
        "3",
        "--alpha",
        "1",
        "--mu",
        "0,1,10",
        "--t-end",
        "20",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let (columns, rows) = parse_plot_data(&read(&dir.path().join("energy_p3_alpha1.dat"))).unwrap();
    assert_eq!(columns, vec!["t", "E_mu=0", "E_mu=1", "E_mu=10"]);
    assert_eq!(rows[0], vec![0.0, 4.0, 4.0, 4.0]);
    assert_eq!(rows.len(), 2001);
}

#[test]
fn quick_figure_panels() {
    let dir = tempfile::tempdir().unwrap();
    duffing(&[
        "reproduce-figure",
        "--t-end",
        "50",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    for (p, slope) in [(3, -2.0), (5, -1.5), (7, -4.0 / 3.0)] {
        for alpha in ["1", "100"] {
            let path = dir.path().join(format!("figure_p{p}_alpha{alpha}.dat"));
            let (columns, rows) = parse_plot_data(&read(&path)).unwrap();
            assert_eq!(columns.len(), 7);
            let last = rows.len() - 1;
            let fitted = (rows[last][6] - rows[0][6]) / (rows[last][0] - rows[0][0]);
            assert!((fitted - slope).abs() < 1e-12, "p={p}: {fitted}");
        }
    }
}
