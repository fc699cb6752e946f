use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn dplap(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dplap"))
        .args(args)
        .arg("--out-dir")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn solve_writes_results_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let out = dplap(&["solve", "--window", "16", "--seed", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.path().join("results.csv"));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("mode,p,q,r,zeta,N,energy,stationarity,sign_changes,iterations,converged,seed,profile")
    );
    let ground: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&ground[..6], ["ground", "2", "3", "1", "4", "16"]);
    assert_eq!(ground[10], "true");
    assert_eq!(ground[11], "3");
    assert!(lines.next().unwrap().starts_with("sign_changing,"));

    let (header, u) = dplap::dump::load_sequence(&dir.path().join("sign_changing.seq")).unwrap();
    assert_eq!(header.radius, 16);
    assert_eq!(dplap::sign_change_count(&u), 1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.contains("energy=")).count(), 2);
}

#[test]
fn usage_and_constraint_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for (args, needle) in [
        (&["solve", "--q", "1.5", "--p", "2"][..], "q > p"),
        (&["verify", "--suite", "decomposition", "--p", "3", "--q", "4"][..], "even"),
        (&["solve", "--window", "abc"][..], "--window"),
        (&["solve", "--frobnicate"][..], "--frobnicate"),
        (&["sweep", "--param", "q", "--from", "3"][..], "--to"),
        (&["solve", "--r", "0.5"][..], "r"),
        (&["counterexample", "--q", "3"][..], "q <= 2"),
    ] {
        let out = dplap(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?}: {err}");
    }
}

#[test]
fn verify_failure_free_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dplap(&["verify", "--samples", "50", "--p", "4", "--q", "5"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = read(&dir.path().join("verify.csv"));
    assert!(csv.starts_with("check,samples,min_slack,tolerance,argmin,pass\n"));
    assert!(csv.contains("decomposition_energy,"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn coefficient_file_overrides_sites() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("coeffs.tsv");
    fs::write(&coeffs, "# n a b c\n0\t1\t1\t3\n1\t1\t1\t3\n").unwrap();
    let base = dplap(&["solve", "--window", "12", "--mode", "ground"], dir.path());
    assert_eq!(base.status.code(), Some(0));
    let base_csv = read(&dir.path().join("results.csv"));
    let out = dplap(
        &["solve", "--window", "12", "--mode", "ground", "--coeff-file", coeffs.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.path().join("results.csv"));
    assert!(csv.contains(",custom\n"), "{csv}");
    let energy = |s: &str| s.lines().nth(1).unwrap().split(',').nth(6).unwrap().parse::<f64>().unwrap();
    // stronger nonlinearity at two sites lowers the level
    assert!(energy(&csv) < energy(&base_csv));

    fs::write(&coeffs, "0\t1\tx\t3\n").unwrap();
    let bad = dplap(&["solve", "--coeff-file", coeffs.to_str().unwrap()], dir.path());
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("coeffs.tsv:1: bad coefficient"));
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_dplap"))
        .args(["counterexample", "--window", "1000"])
        .env("DPLAP_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let csv = read(&dir.path().join("counterexample.csv"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn non_convergence_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dplap(&["solve", "--window", "16", "--max-iter", "2", "--starts", "2", "--mode", "ground"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("start 0") && err.contains("start 1"), "{err}");
}
