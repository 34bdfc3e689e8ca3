use std::process::{Command, Output};

use serde_json::Value;

fn eqmap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqmap")).args(args).output().expect("binary runs")
}

fn eqmap_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqmap")).args(args).env(key, val).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn gaussian_endpoints() {
    let v = stdout_json(&eqmap(&["endpoints", "--x", "1"]));
    assert_eq!(v["u"].as_f64(), Some(0.0));
    assert!((v["z"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert!((v["alpha_plus"].as_f64().unwrap() - 2.0).abs() < 1e-15);
}

#[test]
fn endpoints_csv_lists_derivatives() {
    let o = eqmap(&["endpoints", "--t", "4=0.01", "--order", "3", "--format", "csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,d_x^k u,d_x^k z");
    assert_eq!(lines.len(), 5);
}

#[test]
fn quartic_e1_value() {
    let v = stdout_json(&eqmap(&["e1", "--j", "4", "--t", "0.01"]));
    let e = v["e1"].as_f64().unwrap();
    assert!((e + 0.007767930066687687).abs() < 1e-12, "{e}");
    let m = v["monomial_formula"].as_f64().unwrap();
    assert!((m - e).abs() < 1e-12);
}

#[test]
fn e1_series_has_quartic_anchors() {
    let v = stdout_json(&eqmap(&["e1", "--t", "4=0", "--order", "3"]));
    let coeffs: Vec<f64> = v["terms"].as_array().unwrap().iter().map(|t| t["coefficient"].as_f64().unwrap()).collect();
    let expected = [-1.0, 30.0, -1056.0];
    for (c, e) in coeffs.iter().zip(expected) {
        assert!((c - e).abs() < 1e-8 * e.abs(), "{c} vs {e}");
    }
}

#[test]
fn census_of_one_quartic_vertex() {
    let v = stdout_json(&eqmap(&["census", "--profile", "4:1"]));
    let entries: Vec<(u64, u64, u64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["genus"].as_u64().unwrap(), e["faces"].as_u64().unwrap(), e["count"].as_u64().unwrap()))
        .collect();
    assert_eq!(entries, vec![(0, 3, 2), (1, 1, 1)]);
    assert_eq!(v["half_edges"].as_u64(), Some(4));
}

#[test]
fn census_is_independent_of_thread_count() {
    let args = ["census", "--profile", "3:2", "--profile", "4:1", "--format", "csv"];
    let one = eqmap_env(&args, "EQMAP_THREADS", "1");
    let four = eqmap_env(&args, "EQMAP_THREADS", "4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn coeffs_csv_uses_exact_fractions() {
    let o = eqmap(&["coeffs", "--order", "2", "--format", "csv"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,m,c_phi,c_psi"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 1 + 2 + 3);
    assert!(rows.iter().all(|r| r[2].contains('/') && r[3].contains('/')));
    assert_eq!(rows[1], vec!["1", "1", "0/1", "-1/6"]);
}

#[test]
fn density_csv_defaults_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rho.csv");
    let o = eqmap(&["density", "--grid", "11", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "lambda,psi");
    assert_eq!(lines.len(), 12);
    let mid: Vec<f64> = lines[6].split(',').map(|s| s.parse().unwrap()).collect();
    assert!(mid[0].abs() < 1e-15);
    assert!((mid[1] - 1.0 / std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn potential_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pot.json");
    std::fs::write(&path, r#"{"x": 1, "t": {"4": 0.5}}"#).unwrap();
    let from_file = stdout_json(&eqmap(&["h", "--potential", path.to_str().unwrap(), "--t", "4=0.01"]));
    let from_flags = stdout_json(&eqmap(&["h", "--t", "4=0.01"]));
    assert_eq!(from_file["classical"], from_flags["classical"]);
    assert_eq!(from_file["agree"], Value::Bool(true));
}

#[test]
fn h_reports_all_even_routes() {
    let v = stdout_json(&eqmap(&["h", "--t", "4=0.01", "--t", "2=-0.003"]));
    let gaps = v["relative_gap_to_classical"].as_object().unwrap();
    assert_eq!(gaps.len(), 3);
    assert!(gaps.values().all(|g| g.as_f64().unwrap() < 1e-12));
}

#[test]
fn correlators_at_a_point() {
    let v = stdout_json(&eqmap(&["correlators", "--y", "3"]));
    let p = &v["points"][0];
    assert!(p["loop_residual"].as_f64().unwrap() < 1e-12);
    let w1 = p["w1_leading"]["re"].as_f64().unwrap();
    assert!((w1 - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
}

#[test]
fn domain_errors_exit_with_status_one() {
    let o = eqmap(&["endpoints", "--t", "4=-0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("eqmap: "));
    let o = eqmap(&["census", "--profile", "4:x"]);
    assert_eq!(o.status.code(), Some(1));
    let o = eqmap(&["bogus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_status_matches_report() {
    let o = eqmap(&["verify"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert!(lines.iter().all(|l| l.starts_with("PASS") || l.starts_with("FAIL")));
    let any_fail = lines.iter().any(|l| l.starts_with("FAIL"));
    assert_eq!(o.status.code(), Some(if any_fail { 2 } else { 0 }));
}
