use std::fs;
use std::process::Command;

use cvcorr::cli::{run, SWEEP_HEADER};

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("cvcorr").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn column(row: &str, header: &str, name: &str) -> String {
    let idx = header.split(',').position(|h| h == name).unwrap();
    row.split(',').nth(idx).unwrap().to_string()
}

fn sweep_rows(args: &[&str]) -> Vec<Vec<String>> {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{err}");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some(SWEEP_HEADER));
    lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn vacuum_point() {
    let (code, out, _) = call(&["point", "--r", "0", "--theta", "0", "--t", "0"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(num(&column(lines[1], lines[0], "eof")), 0.0);
    assert_eq!(num(&column(lines[1], lines[0], "logneg")), 0.0);
    assert_eq!(column(lines[1], lines[0], "regularized"), "true");
}

#[test]
fn entangled_point() {
    let (code, out, _) = call(&["point", "--r", "1.2", "--theta", "1.5707963", "--t", "0.5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(num(&column(lines[1], lines[0], "eof")) > 0.0);
}

#[test]
fn bath_constraint_violation_exits_3() {
    let (code, out, err) = call(&["point", "--bath-n", "1", "--bath-m-re", "1.5"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("N(N+1)"), "{err}");
}

#[test]
fn validation_errors_exit_2_and_name_the_flag() {
    for (args, flag) in [
        (vec!["point", "--r", "abc"], "--r"),
        (vec!["point", "--t", "-1"], "--t"),
        (vec!["point", "--gamma", "0"], "--gamma"),
        (vec!["point", "--bath-n", "-0.5"], "--bath-n"),
        (vec!["point", "--nbar-in", "0.1,-0.2"], "--nbar-in"),
        (
            vec![
                "sweep", "--axis", "r", "--min", "0", "--max", "1", "--step", "0",
            ],
            "--step",
        ),
        (
            vec![
                "sweep", "--axis", "r", "--min", "1", "--max", "0", "--step", "0.1",
            ],
            "--min",
        ),
        (
            vec![
                "sweep", "--axis", "phi", "--min", "0", "--max", "1", "--step", "0.1",
            ],
            "--axis",
        ),
        (vec!["fig2", "--precision", "18"], "--precision"),
    ] {
        let (code, _, err) = call(&args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(err.contains(flag), "{args:?}: {err}");
    }
}

#[test]
fn angle_sweep_peaks_on_quarter_turns() {
    let rows = sweep_rows(&[
        "sweep",
        "--axis",
        "theta",
        "--min",
        "0",
        "--max",
        "3.14159265",
        "--step",
        "0.0157",
        "--r",
        "0.3",
        "--t",
        "0.5",
    ]);
    assert_eq!(rows.len(), 201);
    assert!(rows.iter().all(|r| r[0] == "theta"));
    let gip: Vec<f64> = rows.iter().map(|r| num(&r[2])).collect();
    let top = gip.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for (i, v) in gip.iter().enumerate() {
        if *v > top - 1e-6 * top {
            let theta = num(&rows[i][1]);
            let k = (theta / std::f64::consts::FRAC_PI_2).round();
            assert!(
                (theta - k * std::f64::consts::FRAC_PI_2).abs() < 0.0157,
                "peak at {theta}"
            );
        }
    }
}

#[test]
fn squeezing_sweep_sudden_death_interval() {
    let rows = sweep_rows(&[
        "sweep",
        "--axis",
        "r",
        "--min",
        "0",
        "--max",
        "2",
        "--step",
        "0.01",
        "--theta",
        "1.5707963",
        "--t",
        "0.5",
    ]);
    assert_eq!(rows.len(), 201);
    let eof: Vec<f64> = rows.iter().map(|r| num(&r[3])).collect();
    let onset = eof.iter().position(|&e| e > 0.0).unwrap();
    assert!(onset > 30);
    assert!(eof[..onset].iter().all(|&e| e == 0.0));
    assert!(eof[onset..].iter().all(|&e| e > 0.0));
    assert!(rows[1..].iter().all(|r| num(&r[2]) > 0.0));
}

#[test]
fn time_sweep_is_non_increasing() {
    let rows = sweep_rows(&[
        "sweep",
        "--axis",
        "t",
        "--min",
        "0",
        "--max",
        "3",
        "--step",
        "0.01",
        "--r",
        "1.2",
        "--theta",
        "1.5707963",
    ]);
    assert_eq!(rows.len(), 301);
    for col in [2, 3] {
        let v: Vec<f64> = rows.iter().map(|r| num(&r[col])).collect();
        assert!(v.windows(2).all(|w| w[1] <= w[0]), "column {col}");
    }
}

#[test]
fn asymmetric_inputs_print_nan_eof() {
    let (code, out, _) = call(&["point", "--r", "0.5", "--nbar-in", "0,1", "--t", "0.3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(column(lines[1], lines[0], "eof"), "nan");
}

#[test]
fn sweep_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    let args = [
        "sweep",
        "--axis",
        "r",
        "--min",
        "0",
        "--max",
        "1",
        "--step",
        "0.1",
        "--t",
        "0.2",
        "--output",
        p,
        "--precision",
        "17",
    ];
    assert_eq!(call(&args).0, 0);
    let first = fs::read(&path).unwrap();
    assert_eq!(call(&args).0, 0);
    assert_eq!(first, fs::read(&path).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 12);
    // 17 digits round-trip exactly
    let last = text.lines().last().unwrap();
    assert_eq!(num(last.split(',').nth(1).unwrap()), 1.0);
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("s.csv");
    let (code, _, err) = call(&[
        "sweep",
        "--axis",
        "t",
        "--min",
        "0",
        "--max",
        "1",
        "--step",
        "0.5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 4, "{err}");
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let (code, _, _) = call(&["fig4", "--out-dir", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(code, 4);
}

#[test]
fn figure_file_sets() {
    let dir = tempfile::tempdir().unwrap();
    for (fig, expect) in [
        (
            "fig3",
            vec![
                "fig3_ab_t0.1.csv",
                "fig3_ab_t0.5.csv",
                "fig3_ab_t1.csv",
                "fig3_ab_t2.csv",
            ],
        ),
        (
            "fig4",
            vec!["fig4_ab_r0.3.csv", "fig4_ab_r0.8.csv", "fig4_ab_r1.2.csv"],
        ),
    ] {
        let sub = dir.path().join(fig);
        assert_eq!(call(&[fig, "--out-dir", sub.to_str().unwrap()]).0, 0);
        let mut names: Vec<String> = fs::read_dir(&sub)
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        names.sort();
        assert_eq!(names, expect);
        let body = fs::read_to_string(sub.join(expect[0])).unwrap();
        assert_eq!(body.lines().next(), Some(SWEEP_HEADER));
    }
}

#[test]
fn binary_end_to_end() {
    let exe = env!("CARGO_BIN_EXE_cvcorr");
    let ok = Command::new(exe)
        .args(["point", "--r", "0.3", "--t", "0.1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout)
        .unwrap()
        .starts_with("r,theta,phi,t,gip"));
    let bad = Command::new(exe)
        .args(["point", "--bath-n", "1", "--bath-m-re", "1.5"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(3));
    let usage = Command::new(exe)
        .args(["point", "--nope"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let help = Command::new(exe).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
