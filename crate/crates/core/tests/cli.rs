use std::path::Path;
use std::process::{Command, Output};

fn spinboson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinboson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Data rows of a CSV artifact, skipping `#` headers and the column line.
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

const POINT: [&str; 8] = ["--s", "0.8", "--alpha", "0.1", "--omega-s", "1", "--delta", "0.1"];

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.csv", "b.csv"].iter().map(|n| dir.path().join(n)).collect();
    for p in &paths {
        let mut args = vec!["dynamics", "--n-t", "41", "-o", p.to_str().unwrap()];
        args.extend(POINT);
        assert!(spinboson(&args).status.success());
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn header_records_version_and_parameters() {
    let mut args = vec!["spectrum", "--n-omega", "5"];
    args.extend(POINT);
    let out = spinboson(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    assert_eq!(header[0], format!("# spinboson {}", env!("CARGO_PKG_VERSION")));
    for key in ["command = spectrum", "s = 0.8", "alpha = 0.1", "delta = 0.1", "omega_s = 1"] {
        assert!(header.iter().any(|l| l.contains(key)), "missing `{key}` in {header:?}");
    }
    let data = rows(&text);
    assert_eq!(data.len(), 5);
    // Nine significant digits in scientific notation.
    let first = text.lines().find(|l| !l.starts_with('#') && !l.starts_with("omega")).unwrap();
    let cell = first.split(',').next().unwrap();
    assert_eq!(cell, "1.00000000e-4");
}

#[test]
fn uncoupled_dynamics_is_a_cosine() {
    let out = spinboson(&[
        "dynamics", "--s", "0.5", "--alpha", "0", "--delta", "0.2", "--t-max", "50", "--n-t", "26",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let data = rows(&stdout(&out));
    assert_eq!(data.len(), 26);
    for r in data {
        let expect = (0.2 * r[0]).cos();
        assert!((r[1] - expect).abs() < 1e-8, "P({}) = {} vs {expect}", r[0], r[1]);
        assert!((r[2] - expect).abs() < 1e-8, "C({}) = {} vs {expect}", r[0], r[2]);
    }
}

#[test]
fn table1_has_sixteen_unit_ratio_rows() {
    let out = spinboson(&["table1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let data = rows(&stdout(&out));
    assert_eq!(data.len(), 16);
    for r in data {
        assert!((r[6] - 1.0).abs() < 1e-4 && (r[7] - 1.0).abs() < 1e-4, "{r:?}");
    }
}

#[test]
fn config_file_with_flag_override_and_duplicate_warning() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# point\ns = 1\nalpha = 0.1\ndelta = 0.1\nalpha = 0.2\n").unwrap();
    let out = spinboson(&["eta", "--config", cfg.to_str().unwrap(), "--delta", "0.05"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("duplicate key `alpha`"), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# alpha = 0.2"));
    assert!(text.contains("# delta = 0.05"));
    assert!(text.contains("# omega_s = 0.01"));
}

#[test]
fn exit_codes() {
    let code = |out: &Output| out.status.code().unwrap();

    let out = spinboson(&["eta", "--s", "1", "--alpha", "0.1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("delta required"));

    let out = spinboson(&["eta", "--s", "1.5", "--alpha", "0.1", "--delta", "0.1"]);
    assert_eq!(code(&out), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "s = 1\nalpha = oops\n").unwrap();
    let out = spinboson(&["eta", "--config", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 2"));

    // Strong coupling: no tunneling left, so P(t) is undefined.
    let out = spinboson(&["dynamics", "--s", "0.5", "--alpha", "2", "--omega-s", "1", "--delta", "0.1"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    let missing = Path::new("/nonexistent-dir/out.csv");
    let mut args = vec!["eta", "-o", missing.to_str().unwrap()];
    args.extend(POINT);
    assert_eq!(code(&spinboson(&args)), 4);

    let out = spinboson(&["eta", "--config", "/nonexistent.cfg"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn phase_diagram_writes_fit_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("pd.csv");
    let out = spinboson(&[
        "phase-diagram", "--s", "0.8", "--delta-min", "1e-3", "--delta-max", "1e-2", "--per-decade", "2",
        "-o", out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(rows(&csv).len(), 3);
    let side: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("pd.json")).unwrap()).unwrap();
    let fits = side["fits"].as_array().unwrap();
    assert_eq!(fits.len(), 3);
    for f in fits {
        let e = f["exponent"].as_f64().unwrap();
        assert!(e > 0.15 && e < 0.3, "{f}");
    }
    assert!(side["failures"].as_array().unwrap().is_empty());
}

#[test]
fn oracle_check_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let levels = dir.path().join("levels.csv");
    let out = spinboson(&[
        "oracle-check", "--s", "0.9", "--alpha", "0.05", "--delta", "0.1", "--n-modes", "400", "--n-t", "51",
        "--levels", levels.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let summary = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(&format!("# {key} ="))).unwrap();
        line.split('=').nth(1).unwrap().trim().parse().unwrap()
    };
    assert!((summary("completeness") - 1.0).abs() < 1e-8);
    assert!(summary("sup_discrete_vs_pole") < 0.1);
    assert_eq!(summary("levels"), 401.0);
    let level_rows = std::fs::read_to_string(&levels).unwrap().lines().count();
    assert_eq!(level_rows, 402);
}
