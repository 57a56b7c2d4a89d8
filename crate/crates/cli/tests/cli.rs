use std::process::{Command, Output};

use trunclc::diagnostics::SafetyReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trunclc"))
        .args(args)
        .env_remove("TRUNCLC_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Values of a `value,imputed` CSV, skipping header and trailer.
fn csv_values(o: &Output) -> Vec<(f64, bool)> {
    stdout(o)
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (v, i) = l.split_once(',').unwrap();
            (v.parse().unwrap(), i == "true")
        })
        .collect()
}

#[test]
fn sample_deep_normal_tail() {
    let o = run(&[
        "sample", "--dist", "normal", "--param", "mu=0", "--param", "sigma=1", "--lower", "38", "--n", "5", "--method",
        "devroye", "--seed", "7",
    ]);
    assert_eq!(code(&o), 0);
    let v = csv_values(&o);
    assert_eq!(v.len(), 5);
    assert!(v.iter().all(|&(x, imp)| x > 38.0 && !imp));
    let trailer = stdout(&o).lines().last().unwrap().to_string();
    assert!(trailer.starts_with("# proposals=") && trailer.contains("acceptance_rate="));
}

#[test]
fn sample_respects_support_and_bounds() {
    let o = run(&[
        "sample", "--dist", "poisson", "--param", "lambda=5", "--lower", "12", "--upper", "14", "--n", "200",
        "--method", "devroye", "--seed", "1",
    ]);
    assert_eq!(code(&o), 0);
    let v = csv_values(&o);
    assert!(v.iter().all(|&(x, _)| x == 13.0 || x == 14.0));
    assert!(v.iter().any(|&(x, _)| x == 14.0));
}

#[test]
fn its_overflow_is_an_error() {
    let o = run(&[
        "sample", "--dist", "normal", "--lower", "10", "--method", "its", "--n", "1",
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("truncation overflow"));
    // with explicit mode imputation the batch completes, flagged
    let o = run(&[
        "sample", "--dist", "normal", "--lower", "10", "--method", "its", "--impute", "mode",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(csv_values(&o), vec![(10.0, true)]);
}

#[test]
fn degenerate_target_exit_codes() {
    let o = run(&["sample", "--dist", "normal", "--lower", "800", "--n", "3"]);
    assert_eq!(code(&o), 2);
    assert!(csv_values(&o).iter().all(|&(x, imp)| x == 800.0 && imp));
    let o = run(&["sample", "--dist", "normal", "--lower", "800", "--impute", "error"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("log P(I)"));
    let o = run(&[
        "sample", "--dist", "normal", "--lower", "800", "--impute", "inf", "--format", "plain",
    ]);
    assert_eq!((code(&o), stdout(&o).trim()), (2, "inf"));
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        vec!["sample", "--dist", "cauchy"],
        vec!["sample", "--dist", "normal", "--param", "nu=3"],
        vec!["sample", "--dist", "normal", "--param", "sigma=-1"],
        vec!["sample", "--dist", "poisson"],
        vec!["sample", "--dist", "normal", "--lower", "2", "--upper", "1"],
        vec!["sample", "--dist", "normal", "--n", "0"],
        vec!["sample", "--dist", "normal", "--method", "gibbs"],
        vec!["scan", "--dist", "poisson", "--grid", "lambda=1:2:3:cubic"],
        vec!["scan", "--dist", "normal", "--probe", "0:5:1:log"],
        vec!["frobnicate"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 64, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn output_is_deterministic_under_seed() {
    let args = [
        "sample",
        "--dist",
        "gamma",
        "--param",
        "alpha=0.5",
        "--lower",
        "2",
        "--n",
        "50",
        "--seed",
        "9",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let other = run(&[
        "sample",
        "--dist",
        "gamma",
        "--param",
        "alpha=0.5",
        "--lower",
        "2",
        "--n",
        "50",
        "--seed",
        "10",
    ]);
    assert_ne!(run(&args).stdout, other.stdout);

    let base = ["sample", "--dist", "normal", "--n", "5"];
    let from_env = Command::new(env!("CARGO_BIN_EXE_trunclc"))
        .args(base)
        .env("TRUNCLC_SEED", "9")
        .output()
        .unwrap();
    let from_flag = run(&["sample", "--dist", "normal", "--n", "5", "--seed", "9"]);
    assert_eq!(from_env.stdout, from_flag.stdout);
    let overridden = Command::new(env!("CARGO_BIN_EXE_trunclc"))
        .args(["sample", "--dist", "normal", "--n", "5", "--seed", "3"])
        .env("TRUNCLC_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(
        overridden.stdout,
        run(&["sample", "--dist", "normal", "--n", "5", "--seed", "3"]).stdout
    );
}

#[test]
fn numbers_round_trip_exactly() {
    let o = run(&[
        "sample", "--dist", "normal", "--lower", "1", "--n", "100", "--format", "plain", "--seed", "4",
    ]);
    for line in stdout(&o).lines() {
        let x: f64 = line.parse().unwrap();
        assert_eq!(x.to_string(), line);
    }
}

#[test]
fn sample_json_document() {
    let o = run(&[
        "sample",
        "--dist",
        "exponential",
        "--lower",
        "3",
        "--n",
        "4",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["family"], "exponential");
    assert_eq!(v["meta"]["params"]["lambda"], 1.0);
    assert_eq!(v["meta"]["upper"], "inf");
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["stats"]["proposals"].as_u64().unwrap() >= 4);
}

#[test]
fn scan_normal_one_row() {
    let o = run(&[
        "scan",
        "--dist",
        "normal",
        "--probe",
        "0:50:1:linear",
        "--method",
        "both",
    ]);
    assert_eq!(code(&o), 0);
    let r = SafetyReport::read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(r.rows.len(), 1);
    let row = &r.rows[0];
    assert!((6.0..=8.5).contains(&row.eta.unwrap()), "{:?}", row.eta);
    assert!((37.0..=39.0).contains(&row.eta_prime.unwrap()), "{:?}", row.eta_prime);
}

#[test]
fn scan_grids() {
    let o = run(&[
        "scan",
        "--dist",
        "poisson",
        "--grid",
        "lambda=0.1:1000:16:log",
        "--probe",
        "auto",
        "--method",
        "both",
    ]);
    assert_eq!(code(&o), 0);
    let r = SafetyReport::read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(r.rows.len(), 16);
    assert!(r.ordering_counterexamples().is_empty());

    let o = run(&[
        "scan",
        "--dist",
        "geometric",
        "--grid",
        "p=0.01:0.99:20:logit",
        "--probe",
        "geometric-progression",
    ]);
    let r = SafetyReport::read_csv(o.stdout.as_slice()).unwrap();
    assert_eq!(r.rows.len(), 20);
    assert_eq!(r.meta.schedule, "geometric-progression");

    let o = run(&[
        "scan",
        "--dist",
        "binomial",
        "--grid",
        "n=10:100:2:log",
        "--grid",
        "p=0.2:0.8:3:linear",
        "--n-probe",
        "100",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["rows"][5]["params"]["n"], 100.0);
}

#[test]
fn scan_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("trunclc-scan-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let o = run(&[
        "scan",
        "--dist",
        "gamma",
        "--grid",
        "alpha=0.5:4:3:log",
        "--n-probe",
        "200",
        "--seed",
        "2",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let bytes = std::fs::read(&path).unwrap();
    let r = SafetyReport::read_csv(bytes.as_slice()).unwrap();
    assert_eq!(r.to_csv_string().unwrap().into_bytes(), bytes);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validate_ztest() {
    let o = run(&[
        "validate",
        "ztest",
        "--dist",
        "normal",
        "--lower-grid",
        "0:4:0.5",
        "--n",
        "20000",
        "--seed",
        "5",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 10);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",pass")));

    let o = run(&[
        "validate", "ztest", "--dist", "poisson", "--param", "lambda=4", "--lower", "9", "--n", "20000", "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["pass"], 1);

    // imputed rows fail the z-test
    let o = run(&[
        "validate", "ztest", "--dist", "normal", "--lower", "12", "--method", "its", "--n", "100",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn validate_qq_and_memoryless() {
    let o = run(&[
        "validate", "qq", "--dist", "normal", "--lower", "38.45", "--n", "100000",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 100);
    let trailer = out.lines().last().unwrap();
    let d: f64 = trailer
        .trim_start_matches("# ks_distance=")
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(d < 0.01, "{trailer}");

    let o = run(&[
        "validate",
        "memoryless",
        "--dist",
        "geometric",
        "--param",
        "p=0.5",
        "--lower",
        "20",
        "--n",
        "100000",
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).trim_end().ends_with(",pass"));
    let o = run(&[
        "validate",
        "memoryless",
        "--dist",
        "exponential",
        "--lower",
        "25",
        "--n",
        "50000",
        "--format",
        "plain",
    ]);
    assert_eq!(code(&o), 0);
    let o = run(&["validate", "memoryless", "--dist", "normal", "--lower", "2"]);
    assert_eq!(code(&o), 64);
}
