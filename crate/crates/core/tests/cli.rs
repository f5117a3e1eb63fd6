use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;

use h3_biharmonic::curve::{sample_curve, PolynomialAngle};
use h3_biharmonic::factory::b3zero_curve;
use h3_biharmonic::io::write_samples_csv;
use h3_biharmonic::NumericsConfig;

fn bihar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bihar")).args(args).output().expect("spawn bihar")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn field(csv: &str, key: &str, column: usize) -> String {
    csv.lines()
        .map(|l| l.split(',').collect::<Vec<_>>())
        .find(|cols| cols[0] == key)
        .unwrap_or_else(|| panic!("no row {key} in\n{csv}"))[column]
        .to_string()
}

fn number(csv: &str, key: &str) -> f64 {
    field(csv, key, 1).parse().unwrap()
}

fn offset_args(dir: &Path) -> Vec<String> {
    [
        "--out",
        dir.to_str().unwrap(),
        "generate",
        "--sin-alpha0",
        "0.31622776601683794",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "1",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn run_owned(args: &[String]) -> Output {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    bihar(&refs)
}

#[test]
fn tensors_match_reference_tables() {
    let o = bihar(&["tensors", "--m", "0", "--l", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(number(&out, "R_1212"), -0.75);
    assert_eq!(field(&out, "R_1212", 4), "MATCH");
    assert!(!out.contains("DIFF"));
    let moved = stdout(&bihar(&["tensors", "--point", "1,1,0"]));
    assert_eq!(out, moved);
}

#[test]
fn tensors_on_space_form() {
    let out = stdout(&bihar(&["tensors", "--m", "1", "--l", "2", "--point", "0,0,0"]));
    for k in ["K_12", "K_13", "K_23"] {
        assert!((number(&out, k) - 1.0).abs() < 1e-12, "{k}");
    }
}

#[test]
fn tensors_json_on_finite_difference_path() {
    let o = bihar(&[
        "--format",
        "json",
        "--connection",
        "finite-difference",
        "tensors",
        "--point",
        "0.3,-1.2,5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
    assert!(!stdout(&o).contains("\"DIFF\""));
}

#[test]
fn generate_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_owned(&offset_args(dir.path()));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(number(&stdout(&o), "max_tau2") <= 1e-5);
    for f in ["curve.csv", "frenet.json", "bitension.json", "residuals.csv", "summary.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert!(csv.starts_with("s,x,y,z"));
    let v = bihar(&["verify", dir.path().join("curve.csv").to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));
    assert_eq!(field(&stdout(&v), "verdict", 1), "nongeodesic_biharmonic");
}

#[test]
fn generate_is_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run_owned(&offset_args(a.path())).status.success());
    assert!(run_owned(&offset_args(b.path())).status.success());
    for f in ["curve.csv", "frenet.json", "bitension.json", "residuals.csv", "summary.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn generate_surfaces() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = offset_args(dir.path());
    args.push("--surfaces".into());
    assert!(run_owned(&args).status.success());
    let cyl = fs::read_to_string(dir.path().join("cylinder.csv")).unwrap();
    assert!(cyl.starts_with("u,v,x,y,z"));
    assert!(dir.path().join("helicoid.csv").exists());
}

#[test]
fn inadmissible_angle_is_an_input_error() {
    let o = bihar(&["generate", "--alpha0-deg", "90"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("inadmissible"), "{}", stderr(&o));
}

#[test]
fn branches_agree_at_double_root() {
    let alpha0 = (2.0 / 5f64.sqrt()).acos().to_string();
    let plus = bihar(&["generate", "--alpha0", &alpha0, "--branch", "plus", "--samples", "101"]);
    let minus = bihar(&["generate", "--alpha0", &alpha0, "--branch", "minus", "--samples", "101"]);
    assert!(plus.status.success(), "{}", stderr(&plus));
    assert_eq!(plus.stdout, minus.stdout);
}

#[test]
fn verify_rejects_b3zero_curve() {
    let cfg = NumericsConfig::default();
    let spec = b3zero_curve(
        Arc::new(PolynomialAngle {
            coefficients: vec![0.5, 0.3, 0.05],
        }),
        (0.0, 2.0),
        &cfg,
    )
    .unwrap();
    let samples = sample_curve(&spec, 2001, &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3zero.csv");
    write_samples_csv(fs::File::create(&path).unwrap(), &samples, true).unwrap();
    let o = bihar(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(field(&out, "verdict", 1), "not_biharmonic");
    assert!((number(&out, "tau_mean") + 0.5).abs() < 1e-4);
}

#[test]
fn verify_geodesic_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("geo.csv");
    let g = bihar(&[
        "--out",
        path.to_str().unwrap(),
        "geodesic",
        "--point",
        "1,-1,0",
        "--direction",
        "1,0,1",
        "--length",
        "20",
        "--samples",
        "801",
    ]);
    assert!(g.status.success(), "{}", stderr(&g));
    let o = bihar(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "verdict", 1), "geodesic");
}

#[test]
fn verify_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(bihar(&["verify", missing.to_str().unwrap()]).status.code(), Some(2));
    let bad = dir.path().join("bad.csv");
    let mut text = String::from("s,x,y,z\n");
    for i in 0..12 {
        let s = if i == 5 { 0.3 } else { i as f64 * 0.1 };
        text.push_str(&format!("{s},0,0,{s}\n"));
    }
    fs::write(&bad, text).unwrap();
    let o = bihar(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row"), "{}", stderr(&o));
}

#[test]
fn cone_queries() {
    let axis = stdout(&bihar(&["cone", "--direction", "0,0,1"]));
    assert!(axis.contains("geodesic_only"));
    let c: f64 = 0.95;
    let dir = format!("{},0,{}", (1.0 - c * c).sqrt(), c);
    assert!(stdout(&bihar(&["cone", "--direction", &dir])).contains("biharmonic_direction"));
    let sweep = stdout(&bihar(&["cone", "--sweep", "1000"]));
    let edges: Vec<f64> = sweep.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let edge = (2.0 / 5f64.sqrt()).acos();
    assert_eq!(edges.len(), 2);
    assert!((edges[0] - edge).abs() < 1e-5);
    assert!((edges[1] - (std::f64::consts::PI - edge)).abs() < 1e-5);
}

#[test]
fn scan_tables() {
    let out = stdout(&bihar(&["scan", "--grid", "50", "--component", "both"]));
    let rows: Vec<Vec<f64>> = out.lines().skip(1).map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 100);
    for r in &rows {
        assert!((r[5] - 0.25).abs() < 1e-12);
    }
    assert!(rows.iter().any(|r| r[0] < 0.5) && rows.iter().any(|r| r[0] > 2.6));
    assert!(!rows.iter().any(|r| r[0] > 0.5 && r[0] < 2.6));
    let empty = bihar(&["scan", "--range", "1.5,1.6"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty).lines().count(), 1);
    assert!(stderr(&empty).contains("warning"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    fs::write(&path, r#"{"manifold": {"m": 1.0, "l": 2.0}, "point": [0.1, 0.2, 0.3]}"#).unwrap();
    let from_file = stdout(&bihar(&["--config", path.to_str().unwrap(), "tensors"]));
    assert!((number(&from_file, "K_12") - 1.0).abs() < 1e-12);
    let overridden = stdout(&bihar(&["--config", path.to_str().unwrap(), "--m", "0", "--l", "1", "tensors"]));
    assert_eq!(number(&overridden, "K_12"), -0.75);
    fs::write(&path, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(bihar(&["--config", path.to_str().unwrap(), "tensors"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(bihar(&["nonsense"]).status.code(), Some(2));
    assert_eq!(bihar(&["--stencil", "sixth", "tensors"]).status.code(), Some(2));
    assert_eq!(bihar(&["--fd-step", "-1", "tensors"]).status.code(), Some(2));
    assert_eq!(bihar(&["--help"]).status.code(), Some(0));
}
