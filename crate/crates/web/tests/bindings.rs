use serde_json::Value;
use volclust::garch::simulate;
use volclust::ingest::prices_from_returns;
use volclust::{analyze, compute_returns, load_prices, AnalysisConfig, GarchParams, ReturnSeries, Seed};
use volclust_web::{analyze_csv_json, filter_contrast_json, surrogate_contrast_json};

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn surrogate_contrast_flattens() {
    let v = parse(&surrogate_contrast_json(0.05, 0.10, 0.85, 100_000, 3).unwrap());
    assert_eq!(v["kind"], "surrogate");
    assert!(v["raw"]["dvc_p"].as_f64().unwrap() > 0.1);
    assert!(v["transformed"]["dvc_p"].as_f64().unwrap().abs() < 0.05);
    assert!(v["raw"]["profile"].as_array().unwrap().len() > 10);
    assert!(v.get("fit").is_none());
}

#[test]
fn filter_contrast_reports_fit() {
    let v = parse(&filter_contrast_json(0.05, 0.10, 0.85, 50_000, 4).unwrap());
    assert_eq!(v["kind"], "garch-filter");
    let alpha = v["fit"]["alpha"].as_f64().unwrap();
    assert!((alpha - 0.10).abs() < 0.03, "{alpha}");
    assert!(v["transformed"]["dvc_n"].as_f64().unwrap().abs() < 0.05);
}

#[test]
fn rejects_bad_parameters() {
    assert!(surrogate_contrast_json(0.05, 0.5, 0.5, 1_000, 1).unwrap_err().contains("stationarity"));
    assert!(filter_contrast_json(0.05, 0.1, 0.8, 2_000_000, 1).is_err());
    assert!(analyze_csv_json("timestamp,price\n1,100\n2,101\n", 40, 3.0, 100).is_err());
    assert!(analyze_csv_json("not a csv", 41, 3.0, 100).is_err());
}

#[test]
fn csv_matches_library() {
    let r = simulate(&GarchParams::new(0.05, 0.10, 0.85).unwrap(), 20_000, Seed(2)).unwrap();
    let scaled = ReturnSeries::new(r.values().iter().map(|x| x * 0.01).collect()).unwrap();
    let prices = prices_from_returns(&scaled, 100.0).unwrap();
    let mut csv = Vec::new();
    prices.write_csv(&mut csv).unwrap();

    let v = parse(&analyze_csv_json(std::str::from_utf8(&csv).unwrap(), 41, 3.0, 100).unwrap());
    assert_eq!(v["n_returns"], 20_000);
    // returns rebuilt from the CSV can differ from `scaled` in the last ulp
    let reread = compute_returns(&load_prices(csv.as_slice()).unwrap());
    let direct = analyze(&reread, &AnalysisConfig::default()).unwrap();
    assert!((v["result"]["dvc_p"].as_f64().unwrap() - direct.dvc_p).abs() < 1e-12);
    assert!((v["result"]["dvc_n"].as_f64().unwrap() - direct.dvc_n).abs() < 1e-12);
}
