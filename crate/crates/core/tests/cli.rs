//! End-to-end tests of the `guesswork` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn guesswork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_guesswork"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = guesswork(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

#[test]
fn growth_example() {
    let v = json(&["growth", "--probs", "0.5,0.5", "--channel", "bern:0.1"]);
    assert!((num(&v, "mean_log_growth") - 0.1 * std::f64::consts::LN_2).abs() < 1e-12);
    assert!((num(&v, "log_mean_growth") - 1.1f64.ln()).abs() < 1e-12);
}

#[test]
fn exact_moment_matches_closed_form() {
    let v = json(&["exact", "--probs", "0.5,0.5", "--channel", "bern:0.3", "-k", "20", "--alpha", "1"]);
    let want = ((1.3f64.powi(20) + 1.0) / 2.0).ln();
    assert!((num(&v, "log_moment") / want - 1.0).abs() < 1e-9);
}

#[test]
fn entropy_in_bits() {
    let v = json(&["entropy", "--probs", "0.5,0.5", "--alpha", "0.5", "--bits"]);
    assert!((num(&v, "renyi_entropy") - 1.0).abs() < 1e-12);
    assert_eq!(v["unit"], "bits");
    let v = json(&["entropy", "--probs", "0.25,0.75", "--alpha", "inf"]);
    assert!((num(&v, "renyi_entropy") + 0.75f64.ln()).abs() < 1e-15);
}

#[test]
fn compare_reports_flag() {
    let v = json(&["compare", "--probs", "0.5,0.5", "--channel", "det:0.13", "--versus", "bern:0.1"]);
    assert_eq!(v["noisier_but_easier"], true);
    let v = json(&["compare", "--probs", "0.5,0.5", "--channel", "det:0.15", "--versus", "bern:0.1"]);
    assert_eq!(v["noisier_but_easier"], false);
}

#[test]
fn ratefn_routes_agree() {
    let v = json(&["ratefn", "--probs", "0.5,0.5", "--channel", "markov:0.1,0.4", "--points", "9"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert!((num(r, "subordinated_rate_inf") - num(r, "subordinated_rate_dual")).abs() < 1e-6);
    }
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--probs", "0.5,0.5", "--channel", "bern:0.5", "-k", "16", "--trials", "500", "--seed", "7"];
    let a = guesswork(&args);
    let b = guesswork(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_output() {
    let out = guesswork(&["growth", "--probs", "0.5,0.5", "--channel", "bern:0.1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert!(header.contains(&"log_mean_growth"));
    assert_eq!(lines.count(), 1);
}

#[test]
fn exit_codes() {
    let bad_sum = guesswork(&["growth", "--probs", "0.5,0.6", "--channel", "bern:0.1"]);
    assert_eq!(bad_sum.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_sum.stderr).contains("1.1"));
    assert_eq!(guesswork(&["growth", "--probs", "0.5,0.5", "--channel", "gauss:1"]).status.code(), Some(2));
    assert_eq!(guesswork(&["exact", "--probs", "0.5,0.5"]).status.code(), Some(2));
    let too_long = guesswork(&["approx", "--probs", "0.2,0.3,0.5", "-k", "20"]);
    assert_eq!(too_long.status.code(), Some(1));
}

#[test]
fn config_file_defaults_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"probs": [0.5, 0.5], "channel": "bern:0.1", "bits": true}"#).unwrap();
    let cfg = cfg.to_str().unwrap();
    let v = json(&["growth", "--config", cfg]);
    assert_eq!(v["unit"], "bits");
    assert!((num(&v, "mean_log_growth") - 0.1).abs() < 1e-12);
    let v = json(&["growth", "--config", cfg, "--channel", "bern:0.2"]);
    assert!((num(&v, "mean_log_growth") - 0.2).abs() < 1e-12);
}

#[test]
fn figures_are_byte_stable_and_match_library() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["fig1", "fig2", "fig3"] {
        let a = guesswork(&["figure", id]);
        let b = guesswork(&["figure", id]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{id}");
        let lib = erasure_guesswork::figures::emit_figure_data(id.parse().unwrap()).to_csv_string();
        assert_eq!(String::from_utf8(a.stdout).unwrap(), lib);
        let path = dir.path().join(format!("{id}.csv"));
        let out = guesswork(&["figure", id, "--out", path.to_str().unwrap()]);
        assert!(out.status.success() && out.stdout.is_empty());
        assert_eq!(std::fs::read_to_string(&path).unwrap(), lib);
    }
}

#[test]
fn figure_schema() {
    let text = String::from_utf8(guesswork(&["figure", "fig3"]).stdout).unwrap();
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(headers, ["q", "det14", "bern10", "diff"]);
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 99);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    assert!(rows.iter().all(|r| r[3] > 0.0));
}

#[test]
fn fig1_bernoulli_dominates() {
    let d = erasure_guesswork::figures::emit_figure_data(erasure_guesswork::figures::FigureId::Fig1);
    let fig2 = erasure_guesswork::figures::emit_figure_data(erasure_guesswork::figures::FigureId::Fig2);
    for (i, (r, g)) in d.rows.iter().zip(&fig2.rows).enumerate() {
        assert_eq!(g[1], r[2] - r[1]);
        if i == 0 || i == 100 {
            assert!((r[2] - r[1]).abs() < 1e-12);
        } else {
            assert!(r[1] < r[2]);
        }
    }
}
