use std::path::Path;
use std::process::{Command, Output};

fn witbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witbench"))
        .args(args)
        .env_remove("WITBENCH_THREADS")
        .output()
        .expect("spawn witbench")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn split_csv(line: &str) -> Vec<String> {
    let mut fields = vec![String::new()];
    let mut quoted = false;
    for c in line.chars() {
        match c {
            '"' => quoted = !quoted,
            ',' if !quoted => fields.push(String::new()),
            c => fields.last_mut().unwrap().push(c),
        }
    }
    fields
}

/// Parses a two-line CSV into (column, value) pairs.
fn single_row(out: &Output) -> Vec<(String, String)> {
    let text = stdout(out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let row = lines.next().unwrap();
    split_csv(header).into_iter().zip(split_csv(row)).collect()
}

fn field(row: &[(String, String)], name: &str) -> String {
    row.iter()
        .find(|(k, _)| k == name)
        .unwrap_or_else(|| panic!("no column {name}"))
        .1
        .clone()
}

fn num(row: &[(String, String)], name: &str) -> f64 {
    field(row, name).parse().unwrap()
}

#[test]
fn bounds_unit_point() {
    let out = witbench(&["bounds", "--k", "1", "--sigma0", "1", "--noise", "uniform"]);
    assert!(out.status.success());
    let row = single_row(&out);
    assert_eq!(field(&row, "upper"), "0.5");
    assert_eq!(field(&row, "winner"), "zero-input");
    assert!((num(&row, "lower") - 0.1340267362668529).abs() < 1e-9);
}

#[test]
fn bounds_rejects_nonpositive_k() {
    for k in ["0", "-1", "nan"] {
        let out = witbench(&["bounds", "--k", k, "--sigma0", "1"]);
        assert_eq!(out.status.code(), Some(2), "k={k}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("k must be"));
    }
}

#[test]
fn bounds_degenerate_prior() {
    let row = single_row(&witbench(&["bounds", "--k", "1", "--sigma0", "0", "--noise", "uniform"]));
    assert_eq!(field(&row, "upper"), "0");
    assert_eq!(field(&row, "lower"), "0");
    assert_eq!(field(&row, "ratio"), "1");
}

#[test]
fn malformed_flags_are_usage_errors() {
    assert_eq!(witbench(&["bounds", "--k", "abc", "--sigma0", "1"]).status.code(), Some(2));
    assert_eq!(witbench(&["bounds", "--sigma0", "1"]).status.code(), Some(2));
    assert_eq!(witbench(&["bounds", "--k", "1", "--sigma0", "1", "--noise", "cauchy"]).status.code(), Some(2));
    assert_eq!(witbench(&["simulate", "--k", "1", "--sigma0", "1", "--strategy", "magic"]).status.code(), Some(2));
    assert_eq!(witbench(&["adversarial", "--k", "1", "--strategy", "linear"]).status.code(), Some(2));
    assert_eq!(
        witbench(&["adversarial", "--k", "1", "--strategy", "quantizer", "--x0-range", "2:2"]).status.code(),
        Some(2)
    );
    assert_eq!(witbench(&["simulate", "--k", "1", "--sigma0", "1", "--strategy", "best", "--n", "5"]).status.code(), Some(2));
    assert_eq!(witbench(&["--version"]).status.code(), Some(0));
}

#[test]
fn simulate_zero_input_is_reproducible() {
    let args = [
        "simulate", "--strategy", "zero-input", "--k", "1", "--sigma0", "1", "--noise", "uniform", "--n", "100000",
        "--seed", "7",
    ];
    let a = witbench(&args);
    let b = witbench(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let row = single_row(&a);
    let mean = num(&row, "mean");
    assert!((mean - 0.5).abs() <= num(&row, "ci_halfwidth"), "{mean}");
    assert!(num(&row, "lower") <= mean && mean <= num(&row, "upper") + num(&row, "ci_halfwidth"));
}

#[test]
fn simulate_quantizer_large_prior() {
    let row = single_row(&witbench(&["simulate", "--strategy", "quantizer", "--k", "1", "--sigma0", "100", "--seed", "3"]));
    assert!((num(&row, "mean") - 1.0).abs() <= num(&row, "ci_halfwidth"));
}

#[test]
fn simulate_linear_and_best() {
    let out = witbench(&[
        "simulate", "--strategy", "linear", "--alpha", "-0.5", "--beta", "0.25", "--k", "0.3", "--sigma0", "2",
        "--n", "2000", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["strategy"], "linear(-0.5,0.25)");
    let row = single_row(&witbench(&["simulate", "--strategy", "best", "--k", "0.01", "--sigma0", "100", "--n", "1000"]));
    assert_eq!(field(&row, "strategy"), "quantizer");
}

#[test]
fn adversarial_examples() {
    let row = single_row(&witbench(&["adversarial", "--strategy", "quantizer", "--k", "0.5"]));
    assert_eq!(field(&row, "worst_case"), "0.75");
    assert_eq!(field(&row, "on_x0_boundary"), "false");

    let row = single_row(&witbench(&["adversarial", "--strategy", "zero-input-passthrough", "--k", "2"]));
    let wc = num(&row, "worst_case");
    assert!((3.0 - 1e-6..=3.0).contains(&wc), "{wc}");

    let row = single_row(&witbench(&["adversarial", "--strategy", "linear", "--alpha", "-0.5", "--beta", "0.5", "--k", "1"]));
    assert_eq!(field(&row, "on_x0_boundary"), "true");

    let row = single_row(&witbench(&[
        "adversarial", "--strategy", "quantizer", "--k", "1", "--x0-range", "-3,5", "--grid", "101",
    ]));
    assert_eq!((num(&row, "x0_lo"), num(&row, "x0_hi")), (-3.0, 5.0));
}

fn sweep_args<'a>(out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["sweep", "--k", "0.01,0.3,5", "--sigma0", "0.1:100:3", "--n", "500", "--seed", "4", "--out", out];
    v.extend_from_slice(extra);
    v
}

#[test]
fn sweep_csv_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(witbench(&sweep_args(a.to_str().unwrap(), &[])).status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_witbench"))
        .args(sweep_args(b.to_str().unwrap(), &[]))
        .env("WITBENCH_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());

    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "k,sigma0,noise,m,upper,lower,p_star,ratio,mu_bound,mc_best_mean,mc_best_ci,linear_cost,linear_ratio,winner"
    );
    assert_eq!(lines.len(), 1 + 9 + 1);
    assert!(lines[1].starts_with("0.01,0.1,uniform,1,"));
    assert!(lines[9].starts_with("5,100,uniform,1,"));
    assert!(lines[10].starts_with("summary,,uniform,1,"));
    assert!(lines[10].ends_with(",certified"));
}

#[test]
fn sweep_single_degenerate_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.csv");
    let p = path.to_str().unwrap();
    let out = witbench(&["sweep", "--k", "1", "--sigma0", "0", "--n", "100", "--out", p]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[4..10], ["0", "0", "0", "1", "50", "0"]);
}

#[test]
fn sweep_json_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    let out_path = dir.path().join("out.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"k_grid": [0.1, 1.0], "sigma0_grid": {{"lo": 1, "hi": 10, "count": 2}}, "noise": "triangular",
                "n": 300, "seed": 2, "m": 2, "format": "json", "out_path": {:?}}}"#,
            out_path.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = witbench(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["noise"], "triangular");
    assert_eq!(rows[0]["m"], 2);
    assert_eq!(rows[4]["k"], "summary");
    assert!(rows[4]["ratio"].as_f64().unwrap() <= rows[4]["mu_bound"].as_f64().unwrap());

    // Flags override the file.
    let out = witbench(&["sweep", "--config", cfg.to_str().unwrap(), "--format", "csv", "--out", "-"]);
    assert!(stdout(&out).starts_with("k,sigma0,"));
}

#[test]
fn sweep_adversarial_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("adv.csv");
    let out = witbench(&["sweep", "--model", "adversarial", "--k", "1e-3:1e2:50", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let summary: Vec<&str> = text.lines().last().unwrap().split(',').collect();
    assert_eq!(summary[0], "summary");
    assert!(summary[4].parse::<f64>().unwrap() <= 17.08);
    assert_eq!(summary[6], "certified");
}

#[test]
fn sweep_custom_density_file() {
    let dir = tempfile::tempdir().unwrap();
    let density = dir.path().join("tent.txt");
    std::fs::write(&density, "# tent\n-1 0\n0 1\n1 0\n").unwrap();
    let noise = format!("file:{}", density.display());
    let out = witbench(&["bounds", "--k", "1", "--sigma0", "1", "--noise", &noise]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let row = single_row(&out);
    // A tent rescaled to unit variance is the triangular law.
    let tri = single_row(&witbench(&["bounds", "--k", "1", "--sigma0", "1", "--noise", "triangular"]));
    assert!((num(&row, "lower") - num(&tri, "lower")).abs() < 1e-6);
    assert!((num(&row, "mu_bound") - num(&tri, "mu_bound")).abs() < 1e-4);

    let missing = witbench(&["bounds", "--k", "1", "--sigma0", "1", "--noise", "file:/nonexistent/d.txt"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn sweep_unwritable_path_is_io_error() {
    let out = witbench(&["sweep", "--k", "1", "--sigma0", "1", "--n", "100", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!Path::new("/nonexistent/dir/out.csv").exists());
}

#[test]
fn sweep_rejects_bad_config() {
    assert_eq!(witbench(&["sweep", "--k", "1", "--n", "50"]).status.code(), Some(2));
    assert_eq!(witbench(&["sweep", "--config", "/nonexistent/cfg.json"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"k_grid": []}"#).unwrap();
    assert_eq!(witbench(&["sweep", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn invalid_thread_count_is_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_witbench"))
        .args(["bounds", "--k", "1", "--sigma0", "1"])
        .env("WITBENCH_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
