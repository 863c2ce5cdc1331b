use std::fs;
use std::process::{Command, Output};

use haar_digits::{Base, DigitLaw};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_haar-digits"));
    c.env_remove("HAAR_DIGITS_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let o = run(args);
    let text = stdout(&o);
    (
        serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")),
        o.status.code().unwrap(),
    )
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

fn test_stat(report: &Value, name: &str) -> f64 {
    report["tests"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["test"] == name)
        .unwrap()["statistic"]
        .as_f64()
        .unwrap()
}

#[test]
fn law_benford_row_at_two() {
    let o = run(&["law", "--law", "benford", "--base", "10", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let row = rows.iter().find(|r| &r[0] == "grid" && &r[1] == "2").unwrap();
    assert_eq!(&row[2], "0.301029995664");
    assert_eq!(rows.iter().filter(|r| &r[0] == "grid").count(), 99);
    assert_eq!(rows.iter().filter(|r| &r[0] == "digit").count(), 9);

    let (v, code) = json(&["law", "--law", "benford"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    let grid = v["grid"].as_array().unwrap();
    assert_eq!(grid[11]["s"].as_f64(), Some(2.0));
    // Printed at 12 significant digits.
    let cdf = grid[11]["cdf"].as_f64().unwrap();
    assert!((cdf - std::f64::consts::LOG10_2).abs() < 5e-13);
}

#[test]
fn law_sphere_two_is_uniform() {
    let (v, _) = json(&["law", "--law", "sphere-exact", "--n", "2", "--base", "10"]);
    for row in v["grid"].as_array().unwrap() {
        let s = row["s"].as_f64().unwrap();
        assert!((row["cdf"].as_f64().unwrap() - (s - 1.0) / 9.0).abs() < 1e-9);
    }
}

#[test]
fn power_one_matches_benford_bytes() {
    for format in ["csv", "json"] {
        let a = run(&["law", "--law", "power", "--k", "1", "--base", "10", "--format", format]);
        let b = run(&["law", "--law", "benford", "--base", "10", "--format", format]);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["law", "--law", "benford", "--k", "2"][..],
        &["law", "--law", "power"],
        &["law", "--law", "sphere-exact"],
        &["law", "--law", "uniform", "--n", "3"],
        &["law", "--law", "sphere-erf", "--n", "1"],
        &["law", "--law", "benford", "--base", "1"],
        &["law", "--law", "nonsense"],
        &["sample", "--group", "triangular", "--entry", "2,1"],
        &["sample", "--group", "orthogonal", "--entry", "0,1"],
        &["sample", "--group", "diagonal", "--n", "1", "--det-one"],
        &["sample", "--group", "rplus", "--n", "3"],
        &["sample", "--group", "power"],
        &["sample", "--group", "sphere", "--N", "0"],
        &["fig1", "--dims", "0"],
        &["verify", "--suite", "cone", "--eps", "1.0"],
    ] {
        let o = run(args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn gln_determinants_benford() {
    let (v, code) = json(&[
        "sample", "--group", "gln-det", "--n", "3", "--N", "1000000", "--seed", "42",
    ]);
    assert_eq!(code, 0);
    assert!(test_stat(&v, "chi_square") < 26.12);
    assert_eq!(v["workers"], 4);
}

#[test]
fn orthogonal_entry_follows_sphere_law() {
    let (v, code) = json(&[
        "sample",
        "--group",
        "orthogonal",
        "--n",
        "10",
        "--N",
        "100000",
        "--seed",
        "42",
        "--entry",
        "1,1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["law"]["law"], "sphere_exact");
    assert_eq!(v["law"]["n"], 9);
    assert!(test_stat(&v, "ks") < 0.01);
}

#[test]
fn sphere_two_uniform_significand() {
    let (v, code) = json(&[
        "sample", "--group", "sphere", "--n", "2", "--N", "1000000", "--seed", "7",
    ]);
    assert_eq!(code, 0);
    let ks = test_stat(&v, "ks");
    assert!(ks < 0.005, "{ks}");
}

#[test]
fn gof_failure_exits_one() {
    // A window half-width that is not a power of B skews the off-diagonal significand.
    let (v, code) = json(&[
        "sample",
        "--group",
        "triangular",
        "--entry",
        "1,2",
        "--eps",
        "0.5",
        "--N",
        "200000",
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["pass"], false);
}

#[test]
fn sample_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for k in 0..2 {
        let samples = dir.path().join(format!("s{k}.csv"));
        let report = dir.path().join(format!("r{k}.json"));
        let o = run(&[
            "sample",
            "--group",
            "sln",
            "--n",
            "3",
            "--N",
            "20000",
            "--seed",
            "11",
            "--entry",
            "2,3",
            "--permute",
            "--samples",
            samples.to_str().unwrap(),
            "--output",
            report.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        outs.push((fs::read(&samples).unwrap(), fs::read(&report).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
    let text = String::from_utf8(outs[0].0.clone()).unwrap();
    assert!(text.starts_with("index,value,significand,digit\n"));
    assert_eq!(csv_rows(&text).len(), 20000);
}

#[test]
fn seed_env_fallback() {
    let flagged = run(&["sample", "--group", "rplus", "--N", "1000", "--seed", "7"]);
    let env = bin()
        .args(["sample", "--group", "rplus", "--N", "1000"])
        .env("HAAR_DIGITS_SEED", "7")
        .output()
        .unwrap();
    let default = run(&["sample", "--group", "rplus", "--N", "1000"]);
    assert_eq!(flagged.stdout, env.stdout);
    assert_ne!(flagged.stdout, default.stdout);
    let v: Value = serde_json::from_slice(&default.stdout).unwrap();
    assert_eq!(v["seed"], 42);
}

#[test]
fn fig1_periodicity() {
    let (v, code) = json(&["fig1", "--dims", "100,10000", "--N", "1000000", "--seed", "42"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 18);
    let freq = |dim: u64| -> Vec<f64> {
        rows.iter()
            .filter(|r| r["dim"] == dim)
            .map(|r| r["frequency"].as_f64().unwrap())
            .collect()
    };
    let (a, b) = (freq(100), freq(10000));
    let tv: f64 = 0.5 * a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>();
    assert!(tv < 0.01, "{tv}");
    for f in [&a, &b] {
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
    let want = DigitLaw::sphere_limit(Base::TEN, 100)
        .unwrap()
        .first_digit_probs()
        .unwrap();
    let got: Vec<f64> = rows
        .iter()
        .filter(|r| r["dim"] == 100)
        .map(|r| r["predicted"].as_f64().unwrap())
        .collect();
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-9);
    }
}

#[test]
fn fig1_deterministic_and_default_dims() {
    let a = run(&["fig1", "--N", "2000", "--format", "csv"]);
    let b = run(&["fig1", "--N", "2000", "--format", "csv"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = csv_rows(&stdout(&a));
    assert_eq!(rows.len(), 6 * 9);
}

#[test]
fn verify_suites() {
    let (v, code) = json(&["verify", "--suite", "adjoint"]);
    assert_eq!(code, 0);
    let checks = v["checks"].as_array().unwrap();
    let products: Vec<&Value> = checks
        .iter()
        .filter(|c| c["name"].as_str().unwrap().starts_with("adjoint_product"))
        .collect();
    assert_eq!(products.len(), 4);
    assert!(products.iter().all(|c| c["value"].as_f64().unwrap() < 1e-9));

    let (v, code) = json(&["verify", "--suite", "cone", "--eps", "0.1"]);
    assert_eq!(code, 0);
    let gap = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "cone_mc_relative_gap")
        .unwrap();
    assert!(gap["value"].as_f64().unwrap() < 0.02);

    let (v, code) = json(&["verify", "--suite", "all"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
}

#[test]
fn outputs_round_trip() {
    let commands: [&[&str]; 4] = [
        &["law", "--law", "sphere-limit", "--n", "7"],
        &[
            "sample", "--group", "unitary", "--n", "3", "--N", "5000", "--part", "im",
        ],
        &["fig1", "--dims", "5,50", "--N", "5000"],
        &["verify", "--suite", "adjoint", "--pairs", "5"],
    ];
    for args in commands {
        let text = stdout(&run(args));
        let v: Value = serde_json::from_str(&text).unwrap();
        let mut again = serde_json::to_string_pretty(&v).unwrap();
        again.push('\n');
        assert_eq!(again, text, "{args:?}");

        let mut csv_args = args.to_vec();
        csv_args.extend(["--format", "csv"]);
        let text = stdout(&run(&csv_args));
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(r.headers().unwrap()).unwrap();
        for rec in r.records() {
            let rec = rec.unwrap();
            // Re-format every numeric field; 12 significant digits are stable under reparsing.
            let fields: Vec<String> = rec
                .iter()
                .map(|f| match f.parse::<f64>() {
                    Ok(x) if f.contains(['.', 'e']) => {
                        let back: f64 = format!("{:.11e}", x).parse().unwrap();
                        assert_eq!(back, x, "{f}");
                        f.to_string()
                    }
                    _ => f.to_string(),
                })
                .collect();
            w.write_record(&fields).unwrap();
        }
        assert_eq!(
            String::from_utf8(w.into_inner().unwrap()).unwrap(),
            text,
            "{csv_args:?}"
        );
    }
}
