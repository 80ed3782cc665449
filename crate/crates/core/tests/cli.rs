use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn penning(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_penning"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(&penning(args))).unwrap()
}

/// Data rows of a CSV report, skipping `#` lines and the column header.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn numbers(row: &[String]) -> Vec<f64> {
    row.iter().map(|c| c.parse().unwrap()).collect()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("penning-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn spectrum_reports_frequencies() {
    let doc = json(&["spectrum", "--b", "1", "--v", "-0.5"]);
    assert!((doc["omega1"].as_f64().unwrap() - 1.70710678).abs() < 1e-8);
    assert!((doc["omega2"].as_f64().unwrap() - 0.29289322).abs() < 1e-8);
    assert_eq!(doc["omega3"].as_f64().unwrap(), 1.0);
    assert_eq!(doc["verdict"], "stable");
    assert_eq!(doc["config"]["params"]["v"].as_f64().unwrap(), -0.5);
}

#[test]
fn spectrum_rejects_unstable_parameters() {
    let out = penning(&["spectrum", "--b", "0.5", "--v", "-0.3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radial"));
}

#[test]
fn spectrum_check_residuals() {
    let doc = json(&["spectrum", "--b", "1", "--v", "-0.5", "--check"]);
    let check = doc["check"].as_object().unwrap();
    assert!(check["duality_residual"].as_f64().unwrap() < 1e-12);
    for (name, value) in check {
        assert!(value.as_f64().unwrap() < 1e-10, "{name}");
    }
}

#[test]
fn wavefunction_at_the_origin() {
    let text = stdout(&penning(&["wavefunction", "--b", "1", "--v", "-0.5"]));
    assert!(text
        .lines()
        .any(|l| l.starts_with("# state: ") && l.contains("\"norm_const\"")));
    let rows: Vec<Vec<f64>> = csv_rows(&text).iter().map(|r| numbers(r)).collect();
    let origin = rows
        .iter()
        .min_by(|a, b| {
            (a[0].abs() + a[1].abs() + a[2].abs())
                .total_cmp(&(b[0].abs() + b[1].abs() + b[2].abs()))
        })
        .unwrap();
    assert!(origin[..3].iter().all(|x| x.abs() < 1e-12));
    assert!((origin[5] - 0.12699).abs() < 1e-5, "{}", origin[5]);
}

#[test]
fn wavefunction_is_normalized_on_the_default_grid() {
    let text = stdout(&penning(&[
        "wavefunction",
        "--z1",
        "0.5,0.5",
        "--format",
        "json",
    ]));
    let doc: Value = serde_json::from_str(&text).unwrap();
    let volume: f64 = doc["grid"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["step"].as_f64().unwrap())
        .product();
    let mass: f64 = doc["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r[5].as_f64().unwrap())
        .sum::<f64>()
        * volume;
    assert!((mass - 1.0).abs() < 1e-4, "{mass}");
}

#[test]
fn wavefunction_peak_follows_the_label() {
    let text = stdout(&penning(&["wavefunction", "--z1", "1,0"]));
    let rows: Vec<Vec<f64>> = csv_rows(&text).iter().map(|r| numbers(r)).collect();
    let peak = rows.iter().max_by(|a, b| a[5].total_cmp(&b[5])).unwrap();
    let first_x = rows[0][0];
    let x_step = rows.iter().map(|r| r[0]).find(|x| *x != first_x).unwrap() - first_x;
    assert!((peak[0] - 1.189).abs() <= x_step, "{peak:?}");
    assert!(peak[1].abs() <= x_step && peak[2].abs() < 1e-12);
}

#[test]
fn wavefunction_explicit_grid() {
    let text = stdout(&penning(&[
        "wavefunction",
        "--grid",
        "-1:1:0.5",
        "--grid",
        "0:0:1",
        "--grid",
        "0:1:0.5",
    ]));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 5 * 3);
    assert_eq!(rows[0][..3], ["-1.0", "0.0", "0.0"]);
}

#[test]
fn audit_reports_minimum_uncertainty() {
    let doc = json(&[
        "audit", "--b", "1.7", "--v", "-2", "--z1", "0.3,0.1", "--z3", "-1,0",
    ]);
    let products = &doc["labels"][0]["moments"]["uncertainty_products"];
    for u in products.as_array().unwrap() {
        assert_eq!(u.as_f64().unwrap(), 0.5);
    }
}

#[test]
fn audit_energy_mean() {
    let doc = json(&["audit", "--z1", "1,0"]);
    assert!((doc["labels"][0]["energy_mean"].as_f64().unwrap() - 2.91421356).abs() < 1e-8);
}

#[test]
fn audit_oracle_agrees() {
    let doc = json(&[
        "audit", "--z1", "0.6,-0.3", "--z2", "0,0.9", "--z3", "0.4,0.4", "--oracle", "--cutoff",
        "30",
    ]);
    assert!(doc["max_oracle_delta"].as_f64().unwrap() < 1e-8);
}

#[test]
fn audit_capacity_is_a_resource_error() {
    let out = penning(&["audit", "--oracle", "--cutoff", "65"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn scan_marks_stability() {
    let text = stdout(&penning(&[
        "scan",
        "--b-range",
        "0.1:2:0.1",
        "--v-range",
        "-1:0.5:0.1",
    ]));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 20 * 16);
    for row in &rows {
        let v: f64 = row[1].parse().unwrap();
        if v >= 0.0 {
            assert!(row[2].starts_with("unstable"), "{row:?}");
            assert!(row[3].is_empty());
        }
    }
    let find = |b: &str, v: &str| {
        rows.iter()
            .find(|r| r[0] == b && r[1] == v)
            .unwrap()
            .clone()
    };
    let reference = find("1.0", "-0.5");
    assert_eq!(reference[2], "stable");
    assert!((reference[3].parse::<f64>().unwrap() - 1.70710678).abs() < 1e-8);
    assert_eq!(find("1.0", "-1.0")[2], "unstable:radial");
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(penning(&["spectrum", "--b", "nope"]).status.code(), Some(1));
    assert_eq!(penning(&["spectrum", "--z1", "1"]).status.code(), Some(1));
    assert_eq!(
        penning(&["wavefunction", "--grid", "1:0:0.1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(penning(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn config_file_with_flag_override() {
    let path = scratch("run.json");
    std::fs::write(
        &path,
        r#"{"params": {"b": 2.0, "v": -1.0}, "z_labels": [{"z1": [0.5, 0.0]}]}"#,
    )
    .unwrap();
    let doc = json(&["audit", "--config", path.to_str().unwrap(), "--v", "-3"]);
    assert_eq!(doc["config"]["params"]["b"].as_f64().unwrap(), 2.0);
    assert_eq!(doc["config"]["params"]["v"].as_f64().unwrap(), -3.0);
    assert_eq!(doc["labels"][0]["z"][0][0].as_f64().unwrap(), 0.5);

    let missing = penning(&["audit", "--config", "/nonexistent/run.json"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn out_flag_writes_the_report() {
    let path = scratch("spectrum.csv");
    let out = penning(&[
        "spectrum",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# command: \"spectrum\"\n# config: {"));
    assert!(text.contains("\nomega3,1.0\n"));
}

#[test]
fn every_command_is_deterministic() {
    let runs: [&[&str]; 5] = [
        &["spectrum", "--check"],
        &["wavefunction", "--z2", "0.3,-0.7", "--grid", "-1:1:0.1"],
        &["audit", "--z1", "0.2,0.2", "--oracle", "--cutoff", "12"],
        &["scan"],
        &["scan", "--format", "json"],
    ];
    for args in runs {
        let first = penning(args);
        let second = penning(args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}
