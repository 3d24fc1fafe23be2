use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parses single-row CSV output into (header, values).
fn csv_row(text: &str) -> Vec<(String, String)> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    head.into_iter().zip(row).map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn field(row: &[(String, String)], name: &str) -> f64 {
    row.iter()
        .find(|(k, _)| k == name)
        .unwrap_or_else(|| panic!("no column {name}"))
        .1
        .parse()
        .unwrap()
}

fn edge_lines(text: &str) -> usize {
    text.lines().skip(1).filter(|l| !l.trim().is_empty()).count()
}

#[test]
fn gen_complete_and_empty() {
    let full = stdout(&hyperlab(&["gen", "--n", "10", "--r", "3", "--p", "1"]));
    assert_eq!(full.lines().next(), Some("10 3"));
    assert_eq!(edge_lines(&full), 120);
    let empty = stdout(&hyperlab(&["gen", "--n", "10", "--r", "3", "--p", "0"]));
    assert_eq!(edge_lines(&empty), 0);
}

#[test]
fn gen_is_deterministic_and_atomic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for path in [&a, &b] {
        let out = hyperlab(&["gen", "--n", "30", "--r", "4", "--d", "2", "--seed", "5", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let json = stdout(&hyperlab(&["gen", "--n", "30", "--r", "4", "--d", "2", "--seed", "5", "--format", "json"]));
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["edges"].as_array().unwrap().len(), edge_lines(&std::fs::read_to_string(&a).unwrap()));
    assert_eq!(v["seed"], 5);
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 16);
}

#[test]
fn exit_codes_and_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let p = path.to_str().unwrap();
    let both = hyperlab(&["matching-mc", "--n", "20", "--r", "3", "--d", "1", "--p", "0.1", "--out", p]);
    assert_eq!(both.status.code(), Some(2));
    let cap = hyperlab(&["gen", "--n", "400", "--r", "6", "--p", "0.5", "--out", p]);
    assert_eq!(cap.status.code(), Some(3));
    let bad_recipe = hyperlab(&["cover-mc", "--construction", "sidorenko", "--r", "5", "--l", "3", "--n", "20", "--d", "1"]);
    assert_eq!(bad_recipe.status.code(), Some(2));
    let unknown = hyperlab(&["cover-mc", "--construction", "nope", "--n", "20", "--d", "1"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(!Path::new(&path).exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn matching_mc_targets() {
    let zero = csv_row(&stdout(&hyperlab(&["matching-mc", "--r", "3", "--n", "30", "--d", "0", "--trials", "5"])));
    assert_eq!(field(&zero, "mean"), 0.0);
    for (r, n, d, target) in [(3, "60", "1", 1.0 - 3f64.powf(-0.5)), (4, "40", "2", 1.0 - 7f64.powf(-1.0 / 3.0))] {
        let row = csv_row(&stdout(&hyperlab(&[
            "matching-mc", "--r", &r.to_string(), "--n", n, "--d", d, "--trials", "200", "--seed", "3",
        ])));
        let (mean, se) = (field(&row, "mean"), field(&row, "stderr"));
        let slack = 5.0 / n.parse::<f64>().unwrap();
        assert!((mean - target).abs() <= 3.0 * se + slack, "r={r}: {mean} vs {target}");
        assert!((field(&row, "alpha") - target).abs() < 1e-12);
    }
}

#[test]
fn cover_mc_rows() {
    let improved = csv_row(&stdout(&hyperlab(&[
        "cover-mc", "--construction", "r3-improved", "--n", "60", "--d", "1", "--trials", "40", "--seed", "1",
    ])));
    let beta3 = 0.5 * (1.0 - (-0.5 * (1.0 + (-1f64).exp())).exp());
    assert!((field(&improved, "target") - beta3).abs() < 1e-12);
    assert!((field(&improved, "mean_density") - beta3).abs() < 3.0 * field(&improved, "stderr_density") + 5.0 / 60.0);
    assert_eq!(field(&improved, "invalid"), 0.0);

    let basic = csv_row(&stdout(&hyperlab(&[
        "cover-mc", "--construction", "r3-basic", "--n", "40", "--d", "20", "--trials", "10",
    ])));
    assert!((field(&basic, "mean_shadow_fraction") - 0.5).abs() < 0.05);

    let sid = csv_row(&stdout(&hyperlab(&[
        "cover-mc", "--construction", "sidorenko-improved", "--r", "6", "--l", "2", "--n", "20", "--d", "1", "--trials", "10",
    ])));
    assert_eq!(field(&sid, "l"), 2.0);
    assert!(field(&sid, "target") > 0.0 && field(&sid, "target") < 0.375);
}

#[test]
fn rows_carry_hash_and_seed_and_reproduce() {
    let args = ["survival-mc", "--r", "3", "--d", "1", "--trials", "20000", "--seed", "17"];
    let a = stdout(&hyperlab(&args));
    let b = stdout(&hyperlab(&args));
    assert_eq!(a, b);
    let row = csv_row(&a);
    assert_eq!(field(&row, "seed"), 17.0);
    assert!(field(&row, "z").abs() <= 3.0);
    assert!((field(&row, "closed_form") - 3f64.powf(-0.5)).abs() < 1e-12);
    let hash = &row.iter().find(|(k, _)| k == "config_hash").unwrap().1;
    assert_eq!(hash.len(), 16);
    let json = stdout(&hyperlab(&[&args[..], &["--format", "json"]].concat()));
    let v: Vec<Value> = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["config_hash"].as_str(), Some(hash.as_str()));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    std::fs::write(&cfg, "r = 3\nn = 40\nd = 1.0\ntrials = 10\nseed = 4\n").unwrap();
    let from_file = csv_row(&stdout(&hyperlab(&["matching-mc", "--config", cfg.to_str().unwrap()])));
    assert_eq!(field(&from_file, "trials"), 10.0);
    let overridden = csv_row(&stdout(&hyperlab(&[
        "matching-mc", "--config", cfg.to_str().unwrap(), "--trials", "12",
    ])));
    assert_eq!(field(&overridden, "trials"), 12.0);
    assert_eq!(field(&overridden, "seed"), 4.0);
    std::fs::write(&cfg, "r = 3\nwrong = 1\n").unwrap();
    assert_eq!(hyperlab(&["matching-mc", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn oracle_compare_trend() {
    let out = stdout(&hyperlab(&["oracle-compare", "--r", "3", "--d", "0.3", "--trials", "100", "--seed", "2"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4, "{out}");
    let row = csv_row(&format!("{}\n{}", lines[0], lines[3]));
    assert_eq!(field(&row, "n"), 40.0);
    assert!(field(&row, "mean_ratio") <= 1.1);
    assert_eq!(field(&row, "solved") + field(&row, "capped"), 100.0);
}

#[test]
fn bounds_table_single_row() {
    let out = stdout(&hyperlab(&["bounds-table", "--r-lo", "6", "--r-hi", "6"]));
    assert!(out.starts_with("r,value,best_l,arg_d,grid_points,refined,coarse_value,config_hash,seed\n"));
    let row = csv_row(&out);
    assert!((field(&row, "value") - 0.7805).abs() <= 5e-4);
    assert_eq!(field(&row, "best_l"), 2.0);
    assert_eq!(field(&row, "grid_points"), 2000.0);
    let positional = stdout(&hyperlab(&["bounds-table", "6", "6"]));
    assert_eq!(positional, out);
    let two = stdout(&hyperlab(&["bounds-table", "6", "7"]));
    assert_eq!(two.lines().count(), 3);
    assert_eq!(hyperlab(&["bounds-table", "6", "--r-hi", "7"]).status.code(), Some(2));
}

#[test]
fn verify_single_criterion() {
    let out = stdout(&hyperlab(&["verify", "--criteria", "5"]));
    assert!(out.starts_with("PASS [ 5]"), "{out}");
    assert_eq!(hyperlab(&["verify", "--criteria", "11"]).status.code(), Some(2));
}
