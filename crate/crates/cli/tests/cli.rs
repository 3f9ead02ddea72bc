//! Runs the `epsnet` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn epsnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epsnet"))
        .args(args)
        .env_remove("EPSNET_ORACLE_CAP")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn net_is_deterministic_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for out in [&a, &b] {
        let o = epsnet(&["net", "--gen", "uniform:1000", "--epsilon", "0.1", "--seed", "1", "--out", path(out)]);
        assert_eq!(code(&o), 0);
        let stats: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(stats["n"], 1000);
        assert!(stats["net_size"].as_u64().unwrap() > 0);
    }
    let net = std::fs::read_to_string(&a).unwrap();
    assert_eq!(net, std::fs::read_to_string(&b).unwrap());
    assert!(net.starts_with("# id x y weight\n"));

    let o = epsnet(&["verify", "--gen", "uniform:1000", "--seed", "1", "--net", path(&a), "--epsilon", "0.1"]);
    assert_eq!((code(&o), stdout(&o)), (0, "OK\n".to_string()));
}

#[test]
fn net_to_stdout_without_out() {
    let o = epsnet(&["net", "--gen", "duplicates:200", "--epsilon", "0.2", "--mode", "hybrid"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("# id x y weight\n"));
    let stats: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(stats["mode"], "hybrid");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&epsnet(&["net", "--gen", "uniform:10", "--epsilon", "1.5"])), 2);
    assert_eq!(code(&epsnet(&["net", "--gen", "uniform:10", "--epsilon", "abc"])), 2);
    assert_eq!(code(&epsnet(&["net", "--epsilon", "0.1"])), 2);
    assert_eq!(code(&epsnet(&["net", "--gen", "blobs:10", "--epsilon", "0.1"])), 2);
    assert_eq!(code(&epsnet(&["frobnicate"])), 2);
}

#[test]
fn io_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    assert_eq!(code(&epsnet(&["net", "--input", path(&missing), "--epsilon", "0.1"])), 3);
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "0 0\n1\n").unwrap();
    let o = epsnet(&["net", "--input", path(&bad), "--epsilon", "0.1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn verify_reports_square_violation() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("square.txt");
    std::fs::write(&pts, "0 0\n4 0\n0 4\n4 4\n2 2\n").unwrap();
    let center = dir.path().join("center.txt");
    std::fs::write(&center, "2 2\n").unwrap();
    let o = epsnet(&["verify", "--input", path(&pts), "--net", path(&center), "--epsilon", "0.4"]);
    assert_eq!(code(&o), 1);
    let text = stdout(&o);
    assert!(text.starts_with("VIOLATION\ndepth 2"), "{text}");
    assert!(text.contains("support ids:"));

    // All points, and ε above one, are always fine.
    let o = epsnet(&["verify", "--input", path(&pts), "--net", path(&pts), "--epsilon", "0.4"]);
    assert_eq!(code(&o), 0);
    let o = epsnet(&["verify", "--input", path(&pts), "--net", path(&center), "--epsilon", "1.5"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_refuses_large_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.txt");
    std::fs::write(&net, "0\n").unwrap();
    let o = epsnet(&["verify", "--gen", "uniform:1001", "--net", path(&net), "--epsilon", "0.1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle cap"));
    let o = Command::new(env!("CARGO_BIN_EXE_epsnet"))
        .args(["verify", "--gen", "uniform:20", "--net", path(&net), "--epsilon", "0.5"])
        .env("EPSNET_ORACLE_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn sweep_writes_csv_and_dat() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let runs = dir.path().join("runs.csv");
    let args = [
        "sweep-c1",
        "--dataset-list",
        "uniform:2000,gauss9:1800",
        "--epsilon",
        "0.05",
        "--c1-range",
        "6:12:3",
        "--trials",
        "2",
        "--out",
        path(&out),
        "--runs",
        path(&runs),
    ];
    assert_eq!(code(&epsnet(&args)), 0);
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "dataset,n,epsilon,c1,trials,mean_size,mean_size_times_eps,std_size_times_eps");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1].starts_with("uniform,2000,0.05,6,2,"));
    let dat = std::fs::read_to_string(out.with_extension("dat")).unwrap();
    assert_eq!(dat.lines().next(), Some("# c1 uniform gauss9"));
    assert_eq!(dat.lines().count(), 4);
    assert_eq!(std::fs::read_to_string(&runs).unwrap().lines().count(), 1 + 12);

    // Same seed, same table.
    let again = dir.path().join("again.csv");
    let mut args2 = args;
    args2[10] = path(&again);
    assert_eq!(code(&epsnet(&args2)), 0);
    assert_eq!(csv, std::fs::read_to_string(&again).unwrap());
}

#[test]
fn table1_shape() {
    let o = epsnet(&["table1", "--datasets", "uniform:3000", "--epsilons", "0.2,0.1", "--trials", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "dataset,n,epsilon,c1,trials,mean_size,std_size,mean_size_times_eps");
    assert_eq!(lines.len(), 3);
    for l in &lines[1..] {
        let m: f64 = l.split(',').nth(7).unwrap().parse().unwrap();
        assert!(m > 5.0 && m < 16.0, "{l}");
    }
}

#[test]
fn stats_at_thirteen_all_ok() {
    let dir = tempfile::tempdir().unwrap();
    let o = epsnet(&["stats", "--gen", "uniform:13", "--k-range", "13:13", "--out", path(dir.path())]);
    assert_eq!(code(&o), 0);
    for f in ["quadruples.csv", "triples.csv"] {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[0], "n,k,count,bound,ok");
        assert_eq!(rows.len(), 2);
        assert!(rows[1].starts_with("13,13,") && rows[1].ends_with(",true"));
    }
    // A square grid is degenerate unless jittered.
    let dir2 = tempfile::tempdir().unwrap();
    let grid = dir2.path().join("grid.txt");
    std::fs::write(&grid, "0 0\n1 0\n0 1\n1 1\n2 2\n").unwrap();
    assert_eq!(code(&epsnet(&["stats", "--gen", path(&grid), "--k-range", "13:13"])), 2);
    assert_eq!(code(&epsnet(&["stats", "--gen", path(&grid), "--k-range", "13:13", "--jitter", "1e-6"])), 0);
}

#[test]
fn stats_histogram() {
    let o = epsnet(&["stats", "--histogram", "--gen", "uniform:2000", "--trials", "3", "--bands", "4"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("k1,k2,mean,ceiling,ok"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn bench_single_size_one_row() {
    let o = epsnet(&["bench", "--sizes", "5000", "--runs", "1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,wall_ms,runs,min_ms,ratio");
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("5000,"));
}
