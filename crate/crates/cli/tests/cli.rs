use std::process::Command;

use ccproto_cli::config::{ExperimentConfig, ProtocolId};
use ccproto_cli::csvout::{read_rows, write_rows, CsvRow, SCHEMA_VERSION};
use ccproto_cli::experiment::monte_carlo_error;
use ccproto_cli::fit::{fit_scaling, Model, ScalingPoint};
use ccproto_cli::regress::{default_golden_dir, regress};
use ccproto_cli::stats::{clopper_pearson, ErrorEstimate};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ccproto"))
}

fn code(args: &[&str]) -> i32 {
    bin().args(args).output().unwrap().status.code().unwrap()
}

fn binom_cdf(x: u64, n: u64, p: f64) -> f64 {
    let mut c = 1.0f64;
    let mut sum = 0.0;
    for i in 0..=x {
        if i > 0 {
            c = c * (n - i + 1) as f64 / i as f64;
        }
        sum += c * p.powi(i as i32) * (1.0 - p).powi((n - i) as i32);
    }
    sum
}

#[test]
fn clopper_pearson_matches_exact_binomial_tails() {
    for n in 1..=30u64 {
        for x in 0..=n {
            let (lo, hi) = clopper_pearson(x, n, 0.99);
            assert!(lo <= x as f64 / n as f64 && x as f64 / n as f64 <= hi);
            if x < n {
                assert!((binom_cdf(x, n, hi) - 0.005).abs() < 1e-9, "upper n={n} x={x}");
            } else {
                assert_eq!(hi, 1.0);
            }
            if x > 0 {
                assert!((1.0 - binom_cdf(x - 1, n, lo) - 0.005).abs() < 1e-9, "lower n={n} x={x}");
            } else {
                assert_eq!(lo, 0.0);
            }
        }
    }
    let e = ErrorEstimate::new(0, 100_000);
    assert!((e.ci_hi - (1.0 - 0.005f64.powf(1.0 / 100_000.0))).abs() < 1e-12);
}

#[test]
fn fit_recovers_the_constant() {
    let pts: Vec<ScalingPoint> = [1.0, 2.0, 3.0, 4.0]
        .iter()
        .map(|&r| ScalingPoint {
            k: 256.0,
            r,
            e: 16.0,
            measured: 3.0 * Model::REkRoot.value(256.0, r, 16.0),
        })
        .collect();
    let f = fit_scaling(&pts, Model::REkRoot).unwrap();
    assert!((f.a - 3.0).abs() < 1e-9);
    assert!(f.max_rel_residual < 1e-9);
    assert!(fit_scaling(&pts[..3], Model::REkRoot).is_err());
}

#[test]
fn csv_round_trip() {
    let mut cfg = ExperimentConfig::new(ProtocolId::ExistsEq, 32, 2, 8);
    cfg.trials = 200;
    let res = monte_carlo_error(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let row = CsvRow::from_result(&cfg, &res);
    write_rows(&path, std::slice::from_ref(&row)).unwrap();
    let back = read_rows(&path).unwrap();
    assert_eq!(back, vec![row.clone()]);
    assert_eq!(row.note("schema"), Some(SCHEMA_VERSION.to_string()).as_deref());
}

#[test]
fn golden_transcripts_are_stable() {
    let rep = regress(&default_golden_dir(), false).unwrap();
    assert!(rep.checked > 0);
    assert!(rep.missing.is_empty(), "missing {:?}", rep.missing);
    assert!(rep.mismatched.is_empty(), "changed {:?}", rep.mismatched);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    assert_eq!(code(&["run", "--protocol", "simple-et", "--k", "16", "--r", "2", "--E", "8", "--trials", "50", "--out", out]), 0);
    assert!(std::fs::read_to_string(out).unwrap().starts_with("run_id,"));
    // usage errors: unknown subcommand, missing parameters, bad values
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["run", "--k", "16"]), 2);
    assert_eq!(code(&["run", "--protocol", "simple-et", "--k", "0", "--r", "2", "--E", "8"]), 2);
    assert_eq!(code(&["run", "--protocol", "nope", "--k", "4", "--r", "1", "--E", "4"]), 2);
    // out-of-domain under the strict policy
    assert_eq!(
        code(&["run", "--protocol", "simple-et", "--k", "16", "--r", "40", "--E", "8", "--policy", "strict", "--out", out]),
        2
    );
    // a missing file is an I/O failure
    assert_eq!(code(&["congest", "--graph", "/nonexistent/graph.txt"]), 1);
    // a fit that cannot meet its residual is an assertion failure
    let csv = dir.path().join("sweep.csv");
    let csv = csv.to_str().unwrap();
    assert_eq!(
        code(&["sweep", "--protocol", "exists-eq", "--k", "256", "--E", "256", "--rs", "1,2,3,4", "--trials", "2", "--out", csv]),
        0
    );
    assert_eq!(code(&["sweep", "--from-csv", csv, "--fit", "ek-root", "--max-residual", "1.0"]), 0);
    assert_eq!(code(&["sweep", "--from-csv", csv, "--fit", "r-ek-root", "--max-residual", "0.01"]), 1);
    assert_eq!(code(&["congest", "--n", "40", "--p", "0.2", "--check"]), 0);
    assert_eq!(code(&["verify-lemmas", "--trials", "50"]), 0);
}

#[test]
fn json_config_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"protocol": "rewind-et", "k": 16, "r": 2, "E": 8, "trials": 20}"#).unwrap();
    let out = dir.path().join("o.csv");
    let status = bin()
        .args(["run", "--config", cfg.to_str().unwrap(), "--trials", "30", "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let rows = read_rows(&out).unwrap();
    assert_eq!(rows[0].trials, 30);
    assert_eq!(rows[0].protocol, "rewind-et");
    std::fs::write(&cfg, r#"{"protocol": "rewind-et", "k": 16, "r": 2, "E": 8, "bogus": 1}"#).unwrap();
    assert_eq!(code(&["run", "--config", cfg.to_str().unwrap()]), 2);
}
