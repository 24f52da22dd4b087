use std::process::{Command, Output};

use twoway_core::attacks::physical_region_grid;
use twoway_core::rates::keyrate_report;
use twoway_core::{attack_from_class, AttackClass, KeyRateReport};

fn twoway(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twoway"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let k = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == name)
        .unwrap();
    lines
        .map(|l| l.split(',').nth(k).unwrap().to_string())
        .collect()
}

#[test]
fn pure_loss_collective_rate_is_secure() {
    let o = twoway(&[
        "keyrate",
        "--T",
        "0.9",
        "--omega",
        "1",
        "--attack",
        "collective",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r: f64 = csv_column(&stdout(&o), "R")[0].parse().unwrap();
    assert!((r - (0.9 * 1.9 / (std::f64::consts::E * 0.1)).log2()).abs() < 1e-12);
}

#[test]
fn insecure_rate_exits_with_two() {
    let o = twoway(&[
        "keyrate", "--T", "0.65", "--omega", "2", "--attack", "sep-sym-",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn json_report_round_trips_exactly() {
    let o = twoway(&[
        "keyrate", "--T", "0.65", "--omega", "2", "--attack", "d", "--format", "json",
    ]);
    let parsed: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let expected = keyrate_report(
        0.65,
        &attack_from_class(AttackClass::SepSymNeg, 2.0).unwrap(),
        1e6,
    )
    .unwrap();
    let expected = serde_json::to_value(expected).unwrap();
    for (key, value) in expected.as_object().unwrap() {
        assert_eq!(
            parsed[key].as_f64().unwrap().to_bits(),
            value.as_f64().unwrap().to_bits(),
            "{key}"
        );
    }
}

#[test]
fn csv_numbers_carry_seventeen_digits() {
    let o = twoway(&[
        "keyrate",
        "--T",
        "0.8",
        "--omega",
        "1.7",
        "--g",
        "-0.3",
        "--g-prime",
        "0.2",
    ]);
    let expected: KeyRateReport = keyrate_report(
        0.8,
        &twoway_core::AttackParams {
            omega: 1.7,
            g: -0.3,
            g_prime: 0.2,
        },
        1e6,
    )
    .unwrap();
    let r: f64 = csv_column(&stdout(&o), "R")[0].parse().unwrap();
    assert_eq!(r.to_bits(), expected.R.to_bits());
}

#[test]
fn bound_violation_is_named() {
    let o = twoway(&[
        "keyrate",
        "--T",
        "0.9",
        "--omega",
        "1",
        "--g",
        "5",
        "--g-prime",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("|g| < omega"), "{}", stderr(&o));
}

#[test]
fn spectrum_violation_is_named() {
    let o = twoway(&[
        "keyrate",
        "--T",
        "0.9",
        "--omega",
        "2",
        "--g",
        "1.9",
        "--g-prime",
        "-1.9",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("minimum symplectic eigenvalue"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(twoway(&["threshold"]).status.code(), Some(1));
    assert_eq!(
        twoway(&["threshold", "--with-oneway"]).status.code(),
        Some(1)
    );
    assert_eq!(twoway(&["keyrate", "--T", "0.9"]).status.code(), Some(1));
    assert_eq!(
        twoway(&["keyrate", "--T", "0.9", "--omega", "1", "--attack", "custom"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(twoway(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        twoway(&["scan", "--T", "0.5", "--omega", "2", "--g", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        twoway(&[
            "threshold",
            "--attack",
            "d",
            "--t-min",
            "0.9",
            "--t-max",
            "0.5"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(twoway(&["--help"]).status.code(), Some(0));
}

#[test]
fn epr_curves_are_identical() {
    let run = |class: &str| {
        let o = twoway(&[
            "threshold",
            "--attack",
            class,
            "--t-min",
            "0.3",
            "--t-max",
            "0.99",
            "--t-step",
            "0.01",
        ]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
            .lines()
            .skip(1)
            .map(|l| l.split_once(',').unwrap().1.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(run("epr+"), run("epr-"));
}

#[test]
fn threshold_output_is_deterministic_across_thread_counts() {
    let args = [
        "threshold",
        "--attack",
        "a,b,c,d,collective",
        "--with-oneway",
        "--t-step",
        "0.05",
    ];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_twoway"))
            .args(args)
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    let single = run("1");
    assert_eq!(single, run("4"));
    let text = String::from_utf8(single).unwrap();
    assert!(text.starts_with("attack,T,omega_star,N_star,secure\n"));
    let attacks = csv_column(&text, "attack");
    assert_eq!(attacks.len(), 6 * 14);
    assert!(attacks.iter().any(|a| a == "oneway"));
    assert!(csv_column(&text, "T")
        .iter()
        .any(|t| t.parse::<f64>().unwrap() == 0.85));
}

#[test]
fn scan_finds_collective_at_pure_loss() {
    let o = twoway(&["scan", "--T", "0.65", "--omega", "1", "--step", "0.1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(csv_column(&text, "best_g")[0].parse::<f64>().unwrap(), 0.0);
    assert_eq!(
        csv_column(&text, "best_g_prime")[0].parse::<f64>().unwrap(),
        0.0
    );
}

#[test]
fn full_grid_has_one_row_per_physical_point() {
    let o = twoway(&[
        "scan",
        "--T",
        "0.65",
        "--omega",
        "2",
        "--step",
        "0.1",
        "--full-grid",
    ]);
    let rows = stdout(&o).lines().count() - 1;
    assert_eq!(rows, physical_region_grid(2.0, 0.1).unwrap().len());

    let o = twoway(&[
        "scan",
        "--T",
        "0.65",
        "--omega",
        "2",
        "--step",
        "0.1",
        "--full-grid",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["grid"].as_array().unwrap().len(), rows);
    assert!(v["minimum"]["R_min"].as_f64().unwrap() < 0.0);
}

#[test]
fn oneway_reports_each_transmissivity() {
    let o = twoway(&["oneway", "--T", "0.7", "--T", "0.9", "--omega", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let r: Vec<f64> = csv_column(&stdout(&o), "R")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(r[0] < 0.0 && r[1] > 0.0);
    assert_eq!(
        twoway(&["oneway", "--T", "0.9", "--omega", "1"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn appendix_tables_cover_every_class() {
    let o = twoway(&["appendix", "--T", "0.65", "--T", "0.95", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let tables = v.as_array().unwrap();
    assert_eq!(tables.len(), 2);
    let information = tables[0]["information"].as_array().unwrap();
    assert_eq!(information.len(), 9 * 5);
    let at_vacuum: Vec<_> = information.iter().filter(|r| r["omega"] == 1.0).collect();
    assert!(at_vacuum
        .iter()
        .all(|r| r["I_AB"] == at_vacuum[0]["I_AB"] && r["chi_EA"] == at_vacuum[0]["chi_EA"]));

    let csv = stdout(&twoway(&["appendix", "--T", "0.65"]));
    let (information, variations) = csv.split_once("\n\n").unwrap();
    assert!(information.starts_with("T,omega,attack,I_AB,chi_EA\n"));
    assert!(variations.starts_with("T,omega,delta_I_AB,delta_chi_EA,flagged\n"));
    assert_eq!(
        twoway(&["appendix", "--T", "0.65", "--mu", "10"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &config,
        r#"{"T": 0.9, "omega": 1, "attack": "collective", "format": "json"}"#,
    )
    .unwrap();

    let o = twoway(&["keyrate", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_start().starts_with('{'));

    let o = twoway(&[
        "keyrate",
        "--config",
        config.to_str().unwrap(),
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("nu1,"));

    std::fs::write(&config, r#"{"temperature": 3}"#).unwrap();
    assert_eq!(
        twoway(&["keyrate", "--config", config.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}
