//! Round-trip, determinism and regression tests for the command line layer.

use std::path::Path;
use std::process::Command;

use macroreal::behavior::quantum_behavior;
use macroreal::catalog::Family;
use macroreal::qubit::{QubitState, Schedule};

use macroreal_cli::config::Grid;
use macroreal_cli::format::{behavior_from_json, behavior_to_json};
use macroreal_cli::output::{parse_csv, to_csv};
use macroreal_cli::scan::{nsit_columns, scan, scan_sequential};

fn plus() -> QubitState {
    QubitState::plus()
}

const FAMS: [Family; 2] = [Family::Wigner3, Family::Vnew];

#[test]
fn behavior_json_round_trips() {
    let sched = Schedule::sigma_z(vec![0.1, 0.5, 1.3]).unwrap();
    let b = quantum_behavior(&QubitState::from_angles(0.7, 2.1).unwrap(), &sched).unwrap();
    let round = behavior_from_json(&behavior_to_json(&b)).unwrap();
    assert_eq!(round.n_times(), b.n_times());
    for ctx in b.contexts() {
        let orig = b.table(ctx).unwrap();
        let back = round.table(ctx).unwrap();
        for (p, q) in orig.probs().iter().zip(back.probs()) {
            assert!((p - q).abs() <= 1e-15);
        }
    }
}

#[test]
fn csv_round_trips_and_is_deterministic() {
    let grid = Grid { start: 0.1, stop: 0.9, step: 0.1 };
    let cols = nsit_columns(3);
    let records = scan(&plus(), 3, &grid.points(), &FAMS).unwrap();
    let csv_a = to_csv(&records, &FAMS, &cols);
    let csv_b = to_csv(&scan(&plus(), 3, &grid.points(), &FAMS).unwrap(), &FAMS, &cols);
    assert_eq!(csv_a, csv_b, "repeated scans must be byte-identical");

    let (header, parsed) = parse_csv(&csv_a).unwrap();
    assert_eq!(header[0], "phase");
    assert_eq!(parsed.len(), records.len());
    for (orig, back) in records.iter().zip(&parsed) {
        assert!((orig.phase - back.phase).abs() <= 1e-10);
        for (a, b) in orig.family_max.iter().zip(&back.family_max) {
            assert!((a - b).abs() <= 1e-10);
        }
        assert_eq!(orig.oracle_feasible, back.oracle_feasible);
        for (a, b) in orig.nsit.iter().zip(&back.nsit) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn parallel_scan_matches_sequential() {
    let grid = Grid { start: 0.05, stop: 1.55, step: 0.05 };
    let par = scan(&plus(), 3, &grid.points(), &FAMS).unwrap();
    let seq = scan_sequential(&plus(), 3, &grid.points(), &FAMS).unwrap();
    assert_eq!(par, seq);
}

#[test]
fn stored_scan_matches_a_fresh_run() {
    let golden_path =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/scan_plus_step01.csv");
    let golden = std::fs::read_to_string(golden_path).unwrap();
    let (_, stored) = parse_csv(&golden).unwrap();

    let grid = Grid { start: 0.01, stop: std::f64::consts::FRAC_PI_2, step: 0.01 };
    let fresh = scan(&plus(), 3, &grid.points(), &FAMS).unwrap();
    assert_eq!(stored.len(), fresh.len());
    for (s, f) in stored.iter().zip(&fresh) {
        assert!((s.phase - f.phase).abs() <= 1e-9);
        for (a, b) in s.family_max.iter().zip(&f.family_max) {
            assert!((a - b).abs() <= 1e-9, "cell drifted: {a} vs {b}");
        }
        assert_eq!(s.oracle_feasible, f.oracle_feasible);
        for (a, b) in s.nsit.iter().zip(&f.nsit) {
            assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn exit_codes_reflect_error_kinds() {
    let bin = env!("CARGO_BIN_EXE_macroreal");

    let ok = Command::new(bin)
        .args(["scan", "--state", "plus", "--grid", "0.1:0.3:0.1", "--family", "LG3"])
        .output()
        .unwrap();
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));

    let bad_family = Command::new(bin)
        .args(["scan", "--grid", "0.1:0.3:0.1", "--family", "NOPE"])
        .output()
        .unwrap();
    assert_eq!(bad_family.status.code(), Some(1));

    let bad_grid = Command::new(bin)
        .args(["scan", "--grid", "backwards", "--family", "LG3"])
        .output()
        .unwrap();
    assert_eq!(bad_grid.status.code(), Some(1));

    let missing_file = Command::new(bin)
        .args(["oracle", "--behavior", "/nonexistent/behavior.json"])
        .output()
        .unwrap();
    assert_eq!(missing_file.status.code(), Some(1));
}

#[test]
fn eval_subcommand_reports_instances() {
    let bin = env!("CARGO_BIN_EXE_macroreal");
    let dir = std::env::temp_dir().join("macroreal-eval-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("behavior.json");

    let sched = Schedule::equal_spacing(3, std::f64::consts::FRAC_PI_6).unwrap();
    let b = quantum_behavior(&QubitState::maximally_mixed(), &sched).unwrap();
    std::fs::write(&path, serde_json::to_string(&behavior_to_json(&b)).unwrap()).unwrap();

    let out = Command::new(bin)
        .args(["eval", "--behavior", path.to_str().unwrap(), "--family", "LG3"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["family"], "LG3");
    let max = doc["max_lhs"].as_f64().unwrap();
    assert!((max - 0.5).abs() <= 1e-12, "LG3 max {max}");
    assert_eq!(doc["instances"].as_array().unwrap().len(), 4);
}
