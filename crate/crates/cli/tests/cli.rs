use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn trk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trk")).args(args).env("TRK_THREADS", "2").output().unwrap()
}

fn out_dir(dir: &Path) -> &str {
    dir.to_str().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

const SINGLE_MODE: &str = r#"{"nu": 1.5, "modes": [{"lambda": 1, "kappa": [0, 0, 1], "amplitude": [1, 0]}]}"#;

#[test]
fn lundquist_grid_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["field-eval", "--field", "lundquist", "--params", r#"{"F0": 1, "nu": 2}"#, "--grid", "-2:2:21", "--out", out_dir(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("field.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 21 * 21 * 21);
    assert!(text.starts_with("x,y,z,re_x,im_x,re_y,im_y,re_z,im_z\n"));
    let meta = read_json(&dir.path().join("field.json"));
    assert_eq!(meta["field"], "lundquist");
    assert_eq!(meta["nu"].as_f64(), Some(2.0));
    assert_eq!(meta["lambda"], 1);
    assert_eq!(meta["mu"], 1);
    assert_eq!(meta["rows"], 9261);
}

#[test]
fn floats_carry_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["field-eval", "--field", "abc", "--grid", "0.1:0.1:1", "--out", out_dir(dir.path())]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("field.csv")).unwrap();
    let row = text.lines().nth(1).unwrap();
    for cell in row.split(',') {
        let mantissa = cell.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 17, "{cell}");
    }
}

#[test]
fn malformed_json_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["field-eval", "--field", "lundquist", "--params", "{\"F0\":", "--out", out_dir(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("field.csv").exists());
}

#[test]
fn unknown_field_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["radon", "--field", "nonexistent", "--out", out_dir(dir.path())]);
    assert_ne!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonexistent"));
}

#[test]
fn single_mode_transform_has_two_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["radon", "--field", "mode", "--params", SINGLE_MODE, "--out", out_dir(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let atoms = read_json(&dir.path().join("radon.json"));
    let atoms = atoms["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 2);
    let f: Vec<f64> = atoms.iter().map(|a| a["frequency"].as_f64().unwrap()).collect();
    assert_eq!(f[0], -f[1]);
    assert_eq!(f[0].abs(), 1.5);
    let meta = read_json(&dir.path().join("radon.meta.json"));
    assert_eq!(meta["mode"], "analytic");
}

#[test]
fn lundquist_transform_is_an_equatorial_ring() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["radon", "--field", "lundquist", "--params", r#"{"ring": 16}"#, "--out", out_dir(dir.path())]);
    assert!(o.status.success());
    let prof = read_json(&dir.path().join("radon.json"));
    let atoms = prof["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 32);
    for a in atoms {
        assert!(a["direction"][2].as_f64().unwrap().abs() < 1e-15);
    }
}

#[test]
fn gaussian_transform_is_numeric_with_parity_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["radon", "--field", "gaussian", "--grid", "-4:4:16", "--quad", "4,8", "--out", out_dir(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("radon.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 16 * 32);
    let meta = read_json(&dir.path().join("radon.meta.json"));
    assert_eq!(meta["mode"], "numeric");
    assert_eq!(meta["parity_pass"], true);
    assert!(meta["parity_residual"].as_f64().unwrap() < 1e-8);
    assert!(meta["warnings"].is_array());
}

#[test]
fn analytic_mode_requires_an_exact_transform() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["radon", "--field", "gaussian", "--mode", "analytic", "--out", out_dir(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(trk(&["verify", "--out", out_dir(a.path())]).status.code(), Some(0));
    assert_eq!(trk(&["verify", "--out", out_dir(b.path())]).status.code(), Some(0));
    let ra = std::fs::read(a.path().join("verify.json")).unwrap();
    let rb = std::fs::read(b.path().join("verify.json")).unwrap();
    assert_eq!(ra, rb);
    let report: Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(report["failed"], 0);
}

#[test]
fn verify_only_filters_records() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["verify", "--only", "ampere", "--out", out_dir(dir.path())]);
    assert!(o.status.success());
    let report = read_json(&dir.path().join("verify.json"));
    let records = report["records"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["name"].as_str().unwrap().starts_with("ampere.")));
}

#[test]
fn tightened_tolerance_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["verify", "--only", "duality", "--tol", "duality.gauge_fix=1e-20", "--out", out_dir(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duality.gauge_fix"));
    let report = read_json(&dir.path().join("verify.json"));
    let rec = report["records"].as_array().unwrap().iter().find(|r| r["name"] == "duality.gauge_fix").unwrap().clone();
    assert_eq!(rec["pass"], false);
}

#[test]
fn unknown_tolerance_name_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = trk(&["verify", "--tol", "no.such=1", "--out", out_dir(dir.path())]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn plot_without_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let o = trk(&["plot", "--kind", "verify-bars", "--input", missing.to_str().unwrap(), "--out", out_dir(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plots_are_written_from_earlier_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let field = d.join("field");
    let radon = d.join("radon");
    let plots = d.join("plots");
    assert!(trk(&["field-eval", "--field", "lundquist", "--grid", "-1:1:5,-1:1:5,0:0:1", "--out", out_dir(&field)]).status.success());
    assert!(trk(&["radon", "--field", "curl_gaussian", "--grid", "-4:4:16", "--quad", "4,8", "--out", out_dir(&radon)]).status.success());
    let csv = field.join("field.csv");
    let grid = radon.join("radon.csv");
    assert!(trk(&["plot", "--kind", "lundquist-radial", "--input", csv.to_str().unwrap(), "--out", out_dir(&plots)]).status.success());
    assert!(trk(&["plot", "--kind", "radon-heatmap", "--input", grid.to_str().unwrap(), "--out", out_dir(&plots)]).status.success());
    let radial = std::fs::read_to_string(plots.join("lundquist_radial.dat")).unwrap();
    assert!(radial.starts_with("# r J0 J1\n0.0000000000000000e0 1.0000000000000000e0 0.0000000000000000e0\n"));
    for stem in ["lundquist_radial", "radon_heatmap"] {
        assert!(plots.join(format!("{stem}.gp")).exists());
        assert!(std::fs::read_to_string(plots.join(format!("{stem}.gp"))).unwrap().contains(&format!("{stem}.dat")));
    }
}

#[test]
fn catalog_lists_every_field() {
    let o = trk(&["catalog"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["lundquist", "mode", "abc", "ck_circular", "gaussian", "curl_gaussian"]);
}

#[test]
fn single_mode_at_origin_is_the_frame_vector() {
    let dir = tempfile::tempdir().unwrap();
    let amp = (2.0 * std::f64::consts::PI).powf(1.5);
    let params = format!(r#"{{"nu": 1, "mu": 1, "g": 1, "modes": [{{"lambda": 1, "kappa": [0, 0, 1], "amplitude": [{amp:e}, 0]}}]}}"#);
    let o = trk(&["field-eval", "--field", "mode", "--params", &params, "--grid", "0:0:1", "--out", out_dir(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(dir.path().join("field.csv")).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let want = [0.0, 0.0, 0.0, h, 0.0, 0.0, h, 0.0, 0.0];
    for (got, want) in row.iter().zip(want) {
        assert!((got - want).abs() < 1e-14, "{row:?}");
    }
}
