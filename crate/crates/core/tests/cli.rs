use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn brane(args: &[&str], dir: &Path, out_dir: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_brane"));
    c.args(args).current_dir(dir).env_remove("BRANE_OUT_DIR");
    if let Some(d) = out_dir {
        c.env("BRANE_OUT_DIR", d);
    }
    c.output().expect("brane runs")
}

fn csv_rows(out: &[u8]) -> Vec<Vec<String>> {
    String::from_utf8(out.to_vec())
        .unwrap()
        .split("\r\n")
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const SCENARIO: &str = r#"amplitudes = [[1, 1.0, 0.0], [-1, 0.5, 0.5], [3, 0.2, -0.1], [-5, 0.0, 0.4], [7, 0.3, 0.3]]

[scenario]
sigma_int = 0.2
sigma_ext_shock = 0.4
rate = 1.0
trend = "-1/2"
maturity = 1.0
phi0 = 3.0
"#;

#[test]
fn spectrum_lowest_root_follows_dispersion() {
    let dir = tempfile::tempdir().unwrap();
    let o = brane(
        &["spectrum", "--phi0", "50", "--m", "1/2", "--r", "1", "--alpha", "+1", "--e-max", "5"],
        dir.path(),
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows[0], ["twice_m", "m", "alpha", "e_tilde", "energy", "radius", "method"]);
    let e: f64 = rows[1][4].parse().unwrap();
    assert!((e.abs() - 0.5).abs() < 5e-3 * 0.5, "{e}");
    assert_eq!(rows[1][2], "+1");
}

#[test]
fn geometry_ricci() {
    let dir = tempfile::tempdir().unwrap();
    let o = brane(&["geometry", "--r", "2", "--what", "ricci"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&o.stdout);
    assert_eq!(rows[1][2].parse::<f64>().unwrap(), 0.5);
}

#[test]
fn verify_passes_at_phi0_ten() {
    let dir = tempfile::tempdir().unwrap();
    let o = brane(&["verify", "--phi0", "10", "--m", "1/2"], dir.path(), None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&o.stdout);
    assert!(rows.len() > 10);
    let gap = rows[1..]
        .iter()
        .map(|r| r[6].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(gap < 1e-6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn verify_reports_failure_with_its_own_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = brane(&["verify", "--phi0", "5", "--m", "1/2", "--tol", "1e-18"], dir.path(), None);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn exit_codes_and_error_records() {
    let dir = tempfile::tempdir().unwrap();
    let usage = brane(&["spectrum", "--phi0", "-3", "--m", "1/2"], dir.path(), None);
    assert_eq!(usage.status.code(), Some(2));
    let missing = brane(&["spectrum", "--m", "1/2"], dir.path(), None);
    assert_eq!(missing.status.code(), Some(2));
    let failure = brane(&["fun", "hyp2f1", "--a", "1", "--b", "1", "--c", "0"], dir.path(), None);
    assert_eq!(failure.status.code(), Some(1));
    let stderr = String::from_utf8(failure.stderr).unwrap();
    let record: Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(record["schema_version"], 1);
    assert_eq!(record["error"]["kind"], "parameter_pole");
}

#[test]
fn out_dir_from_environment_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("artifacts");
    let o = brane(&["dispersion", "--phi0", "10", "--plot"], dir.path(), Some(&out));
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let csv = std::fs::read(out.join("dispersion.csv")).unwrap();
    assert_eq!(csv_rows(&csv).len(), 4);
    let svg = std::fs::read_to_string(out.join("dispersion.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 3);

    let o = brane(
        &["spectrum", "--phi0", "5", "--m", "3/2", "--count", "2", "--plot", "-o", "sp.csv"],
        dir.path(),
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("sp.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn json_tables_are_versioned() {
    let dir = tempfile::tempdir().unwrap();
    let o = brane(&["disk", "--phi0", "1", "--format", "json"], dir.path(), None);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["table"], "disk");
    assert_eq!(v["rows"][0]["kind"], "threshold");
}

#[test]
fn scenario_resume_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.toml"), SCENARIO).unwrap();
    let run = |args: &[&str]| {
        let o = brane(args, dir.path(), None);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        o
    };
    run(&["scenario", "--file", "s.toml", "--t", "0.4", "-o", "half.json", "--plot"]);
    run(&["scenario", "--file", "s.toml", "--t", "0.9", "-o", "direct.json"]);
    run(&["scenario", "--resume", "half.json", "--t", "0.9", "-o", "resumed.json"]);
    let load = |f: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(dir.path().join(f)).unwrap()).unwrap() };
    let (d, r) = (load("direct.json"), load("resumed.json"));
    assert_eq!(d["schema_version"], 1);
    let (da, ra) = (d["amplitudes"].as_array().unwrap(), r["amplitudes"].as_array().unwrap());
    assert_eq!(da.len(), 5);
    for (x, y) in da.iter().zip(ra) {
        assert_eq!(x[0], y[0]);
        for k in 1..3 {
            assert!((x[k].as_f64().unwrap() - y[k].as_f64().unwrap()).abs() < 1e-12);
        }
    }
    let (df, rf) = (d["field"]["psi1"].as_array().unwrap(), r["field"]["psi1"].as_array().unwrap());
    for (x, y) in df.iter().zip(rf) {
        for k in 0..2 {
            assert!((x[k].as_f64().unwrap() - y[k].as_f64().unwrap()).abs() < 1e-12);
        }
    }
    let svg = std::fs::read_to_string(dir.path().join("half.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert_eq!(d["parameters"]["regime"], "panic");

    let late = brane(&["scenario", "--file", "s.toml", "--t", "3"], dir.path(), None);
    let v: Value = serde_json::from_slice(&late.stdout).unwrap();
    assert_eq!(v["beyond_maturity"], true);
    assert!(String::from_utf8_lossy(&late.stderr).contains("exceeds maturity"));
    let back = brane(&["scenario", "--resume", "half.json", "--t", "0.1"], dir.path(), None);
    assert_eq!(back.status.code(), Some(2));
}
