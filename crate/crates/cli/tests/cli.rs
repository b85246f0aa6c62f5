use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn homodyne(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homodyne"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn simulate(dir: &Path, extra: &[&str]) {
    let mut args = vec!["simulate", "--samples", "5000", "--seed", "11", "--out", "s"];
    args.extend_from_slice(extra);
    let out = homodyne(&args, dir);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn simulate_then_reconstruct() {
    let dir = TempDir::new().unwrap();
    simulate(dir.path(), &["--nbar", "2", "--eta", "0.9"]);
    assert!(dir.path().join("s/samples.csv").exists());
    assert!(dir.path().join("s/samples.meta.toml").exists());

    let out = homodyne(
        &["reconstruct", "s/samples.csv", "-o", "total:4", "-o", "mean", "--threads", "1", "--out", "r"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let results = std::fs::read_to_string(dir.path().join("r/results.csv")).unwrap();
    let mut lines = results.lines();
    assert_eq!(lines.next(), Some("observable,param1,param2,value,std_error,count"));
    assert_eq!(lines.count(), 6);
    let manifest = std::fs::read_to_string(dir.path().join("r/run.toml")).unwrap();
    for key in ["seed = \"11\"", "count = 5000", "quadrature_order = 150", "threads = 1", "samples_sha256", "eta = 0.9"] {
        assert!(manifest.contains(key), "manifest lacks {key}:\n{manifest}");
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "state = \"twin-beam\"\nnbar = 1.0\neta = 0.95\nsamples = 2000\nseed = \"18446744073709551615\"\n",
    )
    .unwrap();
    let out = homodyne(&["simulate", "--config", "run.toml", "--samples", "3000", "--out", "s"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let meta = std::fs::read_to_string(dir.path().join("s/samples.meta.toml")).unwrap();
    assert!(meta.contains("18446744073709551615"), "{meta}");
    let rows = std::fs::read_to_string(dir.path().join("s/samples.csv")).unwrap().lines().count();
    assert_eq!(rows, 3001);
}

#[test]
fn validation_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("typo.toml"), "nbarr = 2.0\n").unwrap();
    for args in [
        &["simulate", "--config", "typo.toml"][..],
        &["simulate", "--eta", "0.4"],
        &["simulate", "--nbar", "-1"],
        &["simulate", "--state", "ghz", "--nbar", "1"],
        &["simulate", "--xi", "1.5"],
        &["simulate", "--nbar", "1", "--xi", "0.3"],
        &["simulate", "--quad-order", "3"],
        &["figure", "fig9"],
        &["selftest", "--eta", "0.4"],
    ] {
        let out = homodyne(args, dir.path());
        assert_eq!(code(&out), 1, "{args:?}: {}", stderr(&out));
    }
    assert!(stderr(&homodyne(&["selftest", "--eta", "0.4"], dir.path())).contains("eta = 0.4"));
}

#[test]
fn reconstruct_rejections() {
    let dir = TempDir::new().unwrap();
    simulate(dir.path(), &["--state", "ghz", "--eta", "0.85"]);

    let out = homodyne(&["reconstruct", "s/samples.csv", "--out", "r"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(!dir.path().join("r/results.csv").exists());

    let out = homodyne(&["reconstruct", "s/samples.csv", "-o", "joint:2", "--out", "r"], dir.path());
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    assert!(stderr(&out).contains("incompatible"));

    let out = homodyne(&["reconstruct", "s/samples.csv", "-o", "ghz:4", "--out", "r"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn io_errors_exit_three() {
    let dir = TempDir::new().unwrap();
    let out = homodyne(&["reconstruct", "missing.csv", "-o", "mean"], dir.path());
    assert_eq!(code(&out), 3);

    simulate(dir.path(), &["--nbar", "1"]);
    let path = dir.path().join("s/samples.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("e-1,", "e-2,", 1)).unwrap();
    let out = homodyne(&["reconstruct", "s/samples.csv", "-o", "mean", "--out", "r"], dir.path());
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("checksum"));

    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let out = homodyne(&["simulate", "--samples", "10", "--out", "blocker/sub"], dir.path());
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn figure_rerun_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    for out_dir in ["a", "b"] {
        // At this count the high-N oscillation is lost in noise, so the
        // verdict may be a statistical failure; the files are written either way.
        let out = homodyne(&["figure", "fig2", "--samples", "20000", "--seed", "3", "--out", out_dir], dir.path());
        assert!(matches!(code(&out), 0 | 2), "{}", stderr(&out));
    }
    for file in ["fig2.csv", "fig2.toml"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between reruns");
    }
    let csv = std::fs::read_to_string(dir.path().join("a/fig2.csv")).unwrap();
    assert!(csv.starts_with("N,p,err,p_theory\n"));
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn figure_panels_and_scaling() {
    let dir = TempDir::new().unwrap();
    let out = homodyne(&["figure", "fig3", "--samples", "4000", "--out", "f"], dir.path());
    assert!(matches!(code(&out), 0 | 2), "{}", stderr(&out));
    let right = std::fs::read_to_string(dir.path().join("f/fig3_right.toml")).unwrap();
    assert!(right.contains("count = 8000"), "{right}");

    let out = homodyne(&["figure", "fig5", "--samples", "3000", "--out", "g"], dir.path());
    assert!(matches!(code(&out), 0 | 2), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("g/fig5.csv")).unwrap();
    assert!(csv.starts_with("phi,C,err,C_theory\n"));
    assert_eq!(csv.lines().count(), 17);
}

#[test]
fn selftest_detects_coarse_quadrature() {
    let dir = TempDir::new().unwrap();
    let ok = homodyne(&["selftest"], dir.path());
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    let coarse = homodyne(&["selftest", "--quad-order", "5"], dir.path());
    assert_eq!(code(&coarse), 2);
    assert!(String::from_utf8_lossy(&coarse.stdout).contains("FAIL joint and total photon kernels"));
}
