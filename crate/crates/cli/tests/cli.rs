use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use volclust::garch::simulate;
use volclust::{analyze, compute_returns, load_prices, AnalysisConfig, AnalysisRecord, GarchParams, Seed};

fn volclust(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volclust"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn simulate_then_analyze_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let o = volclust(&["simulate", "--n", "100000", "--seed", "1", "--out", "sim.csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("sim.csv")).unwrap();
    assert_eq!(text.lines().count(), 100_002); // header + 100,001 prices
    assert!(dir.path().join("sim.csv.manifest.json").exists());

    let o = volclust(&["analyze", "sim.csv", "--out", "out"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let record: AnalysisRecord =
        serde_json::from_slice(&fs::read(dir.path().join("out/result.json")).unwrap()).unwrap();
    assert!(record.result.dvc_p > 0.1);
    assert_eq!(record.config, AnalysisConfig::default());
    assert!(dir.path().join("out/profile.csv").exists());
    assert!(dir.path().join("out/manifest.json").exists());

    // the written prices encode the scaled simulation
    let params = GarchParams::new(0.05, 0.10, 0.85).unwrap();
    let r = simulate(&params, 100_000, Seed(1)).unwrap();
    let prices = load_prices(text.as_bytes()).unwrap();
    let reread = compute_returns(&prices);
    assert_eq!(reread.len(), r.len());
    for (a, b) in reread.values().iter().zip(r.values()) {
        assert!((a - b * 0.01).abs() < 1e-12);
    }
    let direct = analyze(&reread, &AnalysisConfig::default()).unwrap();
    assert!((direct.dvc_p - record.result.dvc_p).abs() < 1e-12);
    assert!((direct.dvc_n - record.result.dvc_n).abs() < 1e-12);
}

#[test]
fn too_short_input_fails_at_profile_stage() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("timestamp,price\n");
    for i in 0..10 {
        csv.push_str(&format!("{i},{}\n", 100.0 + (i as f64).sin()));
    }
    fs::write(dir.path().join("short.csv"), csv).unwrap();
    let o = volclust(&["analyze", "short.csv", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("dvc_profile"), "{}", stderr(&o));
}

#[test]
fn bad_input_and_usage_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("neg.csv"), "timestamp,price\n1,100\n2,-5.0\n").unwrap();
    let o = volclust(&["analyze", "neg.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"));

    let o = volclust(&["analyze", "missing.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = volclust(&["simulate", "--alpha", "0.5", "--beta", "0.5", "--out", "x.csv"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("stationarity"));
    assert!(!dir.path().join("x.csv").exists());

    assert_eq!(volclust(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(volclust(&["analyze", "neg.csv", "--bins", "40"], dir.path()).status.code(), Some(1));
    assert_eq!(volclust(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let o = volclust(&["simulate", "--n", "20000", "--out", "sim.csv"], dir.path());
    assert!(o.status.success());
    fs::write(dir.path().join("settings.toml"), "bins = 21\nmin_count = 50\n").unwrap();

    let o = volclust(&["analyze", "sim.csv", "--config", "settings.toml", "--out", "a"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let rec: AnalysisRecord = serde_json::from_slice(&fs::read(dir.path().join("a/result.json")).unwrap()).unwrap();
    assert_eq!((rec.config.n_bins, rec.config.min_count), (21, 50));

    let o = volclust(
        &["analyze", "sim.csv", "--config", "settings.toml", "--bins", "31", "--out", "b"],
        dir.path(),
    );
    assert!(o.status.success());
    let rec: AnalysisRecord = serde_json::from_slice(&fs::read(dir.path().join("b/result.json")).unwrap()).unwrap();
    assert_eq!((rec.config.n_bins, rec.config.min_count), (31, 50));

    let manifest: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("b/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "analyze");
    assert_eq!(manifest["config"]["n_bins"], 31);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);

    // seed comes from the file when no flag is given
    fs::write(dir.path().join("seed.toml"), "seed = 7\n").unwrap();
    assert!(volclust(&["simulate", "--n", "100", "--config", "seed.toml", "--out", "s7.csv"], dir.path()).status.success());
    assert!(volclust(&["simulate", "--n", "100", "--seed", "7", "--out", "f7.csv"], dir.path()).status.success());
    assert_eq!(fs::read(dir.path().join("s7.csv")).unwrap(), fs::read(dir.path().join("f7.csv")).unwrap());
}

#[test]
fn single_seed_experiment_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = volclust(
        &["experiment", "--kind", "surrogate", "--n", "50000", "--seeds", "5", "--out", "exp"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("exp/experiment.json")).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["seed"], 5);
    assert!(rows[0]["dvc_raw"]["p"].is_f64());
    assert!(rows[0]["dvc_transformed"]["n"].is_f64());
    assert_eq!(v["medians"]["successful_seeds"], 1);
    assert_eq!(v["kind"], "surrogate");

    let o = volclust(&["experiment", "--kind", "bootstrap", "--out", "bad"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failing_seeds_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    // far too short for the min_count rule: every seed fails
    let o = volclust(
        &["experiment", "--kind", "surrogate", "--n", "50", "--seeds", "1,2", "--out", "exp"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("exp/experiment.json")).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[0]["error"].as_str().unwrap().contains("dvc_profile"));
    assert!(v["medians"].is_null());
}

fn write_record(path: &Path, dvc_n: f64) {
    let profile = r#"[{"s_value":-1.0,"abs_mean":0.5,"count":100}]"#;
    let text = format!(
        r#"{{"dvc_p":0.25,"dvc_n":{dvc_n},"intercept_p":0.0,"intercept_n":0.0,"n_points_pos":3,"n_points_neg":4,"profile":{profile},"abs_dvc_n":{},"config":{{"n_bins":41,"clip_sigmas":3.0,"min_count":100,"standardize_first":true}},"method":"x"}}"#,
        dvc_n.abs()
    );
    fs::write(path, text).unwrap();
}

#[test]
fn report_tabulates_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    write_record(&dir.path().join("a.json"), -0.5);
    write_record(&dir.path().join("b.json"), -0.25);
    write_record(&dir.path().join("c.json"), -0.125);
    let o = volclust(&["report", "a.json", "b.json", "c.json", "--out", "r"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("r/report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "file,dvc_p,dvc_n,abs_dvc_n,n_points_pos,n_points_neg,status");
    assert_eq!(lines[1], "a.json,0.25,-0.5,0.5,3,4,ok");
    let table = stdout(&o);
    assert!(table.contains("-0.5000"));
    assert!(table.contains(" 0.5000"));

    fs::write(dir.path().join("empty.json"), "").unwrap();
    let o = volclust(&["report", "a.json", "empty.json", "c.json", "--out", "r2"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("r2/report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("empty.json,,,,,,invalid"));
    assert!(lines[3].ends_with(",ok"));

    let o = volclust(&["report", "empty.json", "--out", "r3"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fit_writes_summary_and_variances() {
    let dir = tempfile::tempdir().unwrap();
    assert!(volclust(&["simulate", "--n", "5000", "--out", "sim.csv"], dir.path()).status.success());
    let o = volclust(&["fit", "sim.csv", "--variances", "--out", "f"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("f/fit.json")).unwrap()).unwrap();
    for key in ["omega", "alpha", "beta", "log_likelihood", "converged"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let variances = fs::read_to_string(dir.path().join("f/variances.csv")).unwrap();
    assert_eq!(variances.lines().count(), 5_001);
}
