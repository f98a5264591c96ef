//! Curve-shape regression against stored CSV output.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the files after an intended change.

use std::path::PathBuf;
use std::process::Command;

const CASES: [(&str, &[&str]); 3] = [
    (
        "dynamics_s08.csv",
        &["dynamics", "--s", "0.8", "--alpha", "0.1", "--omega-s", "1", "--delta", "0.1", "--n-t", "101"],
    ),
    (
        "spectrum_s05.csv",
        &["spectrum", "--s", "0.5", "--alpha", "0.05", "--omega-s", "1", "--delta", "0.2", "--n-omega", "120"],
    ),
    (
        "oracle_s09.csv",
        &["oracle-check", "--s", "0.9", "--alpha", "0.05", "--delta", "0.1", "--n-modes", "500", "--n-t", "81"],
    ),
];

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn numbers(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn curves_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in CASES {
        let out = Command::new(env!("CARGO_BIN_EXE_spinboson")).args(args).output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let fresh = String::from_utf8(out.stdout).unwrap();
        let path = golden_path(name);
        if update {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &fresh).unwrap();
            continue;
        }
        let stored = std::fs::read_to_string(&path).unwrap();
        let (a, b) = (numbers(&fresh), numbers(&stored));
        assert_eq!(a.len(), b.len(), "{name}: row count");
        for (i, (ra, rb)) in a.iter().zip(&b).enumerate() {
            for (x, y) in ra.iter().zip(rb) {
                // Error-estimate columns are compared loosely through the floor.
                let tol = 1e-7 * x.abs().max(y.abs()) + 1e-12;
                assert!((x - y).abs() <= tol, "{name} row {i}: {x} vs {y}");
            }
        }
    }
}
