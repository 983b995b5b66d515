use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperthick(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperthick"))
        .args(args)
        .env_remove("HYPERTHICK_THREADS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn ok_json(args: &[&str]) -> Value {
    let out = hyperthick(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json_of(&out)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn assert_meta(v: &Value) {
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert!(v["params_echo"].is_object());
    assert!(v.get("grid_resolution").is_some());
}

#[test]
fn nsphere_three() {
    let v = ok_json(&["nsphere", "--dim", "3"]);
    assert_meta(&v);
    assert_eq!(v["n"], 3);
    assert!((num(&v["V"]) - 4.0 * PI / 3.0).abs() < 1e-14);
    assert!((num(&v["S"]) - 4.0 * PI).abs() < 1e-14);
}

#[test]
fn props_closed_form_critical_13() {
    let v = ok_json(&["stationary", "props", "--n", "3", "--m", "1", "--lambda", "1", "--ecc", "1", "--closed-form"]);
    assert_meta(&v);
    let want = 3.0 * 3f64.sqrt() * PI * (2f64.ln() - 0.375);
    assert!((num(&v["V"]) / want - 1.0).abs() < 1e-12);
    assert_eq!(v["method"], "closed_form");
    assert!(num(&v["residual"]).abs() < 1e-12);
}

#[test]
fn props_quadrature_matches_closed_form() {
    let args = ["stationary", "props", "--n", "3", "--m", "1", "--lambda", "1", "--ecc", "1"];
    let quad = ok_json(&args);
    assert_eq!(quad["method"], "quadrature");
    assert_eq!(quad["grid_resolution"], 256);
    let closed = ok_json(&[&args[..], &["--closed-form"]].concat());
    for key in ["V", "M", "T"] {
        let (a, b) = (num(&quad[key]), num(&closed[key]));
        assert!((a / b - 1.0).abs() < 1e-7, "{key}: {a} vs {b}");
    }
}

#[test]
fn verify_factorization_passes() {
    let v = ok_json(&["verify", "factorization", "--nm", "4"]);
    assert_meta(&v);
    assert_eq!(v["pass"], true);
    assert_eq!(v["suite"], "factorization");
    assert!(v["seed"].is_u64());
}

#[test]
fn verify_failure_exits_one_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.cfg");
    std::fs::write(&cfg, "tolerance.factorization = 1e-300\n").unwrap();
    let out = hyperthick(&["--config", cfg.to_str().unwrap(), "verify", "factorization", "--nm", "8"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["pass"], false);
    assert_eq!(num(&v["tolerance"]), 1e-300);
}

#[test]
fn unknown_flag_is_usage_error() {
    let out = hyperthick(&["nsphere", "--dim", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hyperthick(&["thickness", "--shape", "cube:1", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_is_json() {
    let out = hyperthick(&["stationary", "props", "--n", "3", "--m", "1", "--lambda", "1", "--ecc", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["error"], "unbounded_region");
    assert!(v["detail"].as_str().unwrap().contains("1.5"));

    let out = hyperthick(&["thickness", "--shape", "ball:1;n=3", "--m", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"], "domain");
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn significant_digits(field: &str) -> usize {
    let mantissa = field.split(['e', 'E']).next().unwrap();
    mantissa.chars().filter(|c| c.is_ascii_digit()).count()
}

#[test]
fn profile_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("critical.csv");
    let v = ok_json(&[
        "stationary", "profile", "--nm", "1", "--lambda", "1", "--ecc", "1", "--points", "33", "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_meta(&v);
    assert!((num(&v["z_plus"]) - 2.0).abs() < 1e-12);

    let (header, rows) = read_csv(&csv_path);
    assert_eq!(header, ["z", "R"]);
    assert_eq!(rows.len(), 33);
    for row in &rows {
        for field in row {
            assert_eq!(significant_digits(field), 17, "{field}");
        }
    }
    let first_z: f64 = rows[0][0].parse().unwrap();
    let last_z: f64 = rows[32][0].parse().unwrap();
    assert!(first_z < 0.0 && (last_z - 2.0).abs() < 1e-15);

    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("critical.json")).unwrap()).unwrap();
    assert_meta(&sidecar);
    assert_eq!(sidecar["samples"].as_array().unwrap().len(), 33);
    assert_eq!(num(&sidecar["z_minus"]), first_z);
    assert_eq!(sidecar["params"]["n"], 2);
}

#[test]
fn profile_to_stdout() {
    let out = hyperthick(&["stationary", "profile", "--nm", "2", "--lambda", "1", "--ecc", "0.5", "--points", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "z,R");
    assert_eq!(lines.len(), 10);
}

#[test]
fn dumbbell_sweep_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let v = ok_json(&[
        "dumbbell", "--area", "3.141592653589793", "--centroid", "0.2", "--gamma-sweep", "0.1,0.05",
        "--samples", "200000", "--out", path.to_str().unwrap(),
    ]);
    assert_meta(&v);
    assert!(v["seed"].is_u64());
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["gamma", "T_asymptotic", "T_exact", "stderr"]);
    assert_eq!(rows.len(), 2);
    for row in rows {
        let t: f64 = row[2].parse().unwrap();
        let se: f64 = row[3].parse().unwrap();
        assert!(t < 2.0 && t > 1.8 && se > 0.0);
    }
}

#[test]
fn dumbbell_overlap_is_domain_error() {
    let out = hyperthick(&["dumbbell", "--area", "3.14", "--centroid", "0.01", "--gamma-sweep", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"], "geometry");
}

#[test]
fn thickness_quadrature_of_unit_ball() {
    for (n, m, want) in [(3, 2, PI), (4, 1, 2.0), (2, 1, 2.0)] {
        let shape = format!("ball:1;n={n}");
        let v = ok_json(&["thickness", "--shape", &shape, "--m", &m.to_string()]);
        assert!((num(&v["T"]) - want).abs() < 1e-10, "n={n} m={m}: {}", v["T"]);
        assert!(v["grid_resolution"].is_u64());
    }
}

#[test]
fn thickness_montecarlo_reports_stderr_and_seed() {
    let v = ok_json(&[
        "thickness", "--shape", "ball:2", "--m", "2", "--mc", "--samples", "200000", "--seed", "11",
    ]);
    assert_eq!(v["seed"], 11);
    assert!(v["grid_resolution"].is_null());
    let (t, se) = (num(&v["T"]), num(&v["stderr"]));
    assert!((t - 4.0 * PI).abs() < 5.0 * se, "{t} +- {se}");
    let again = ok_json(&["thickness", "--shape", "ball:2", "--m", "2", "--mc", "--samples", "200000", "--seed", "11"]);
    assert_eq!(v["T"], again["T"]);
}

#[test]
fn thickness_of_file_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shape.json");
    let theta: Vec<f64> = (0..=64).map(|i| PI * i as f64 / 64.0).collect();
    let r = vec![1.5; theta.len()];
    std::fs::write(&path, serde_json::json!({ "n": 3, "theta": theta, "r": r }).to_string()).unwrap();
    let spec = format!("file:{}", path.display());
    let v = ok_json(&["thickness", "--shape", &spec, "--m", "2"]);
    assert!((num(&v["T"]) - PI * 2.25).abs() < 1e-10);
    assert!((num(&v["V"]) - 4.0 * PI / 3.0 * 3.375).abs() < 1e-10);

    let out = hyperthick(&["thickness", "--shape", "file:/nonexistent/shape.json", "--m", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["error"], "io");
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("defaults.cfg");
    std::fs::write(&cfg, "# pinned\nresolution = 64\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_cfg = ok_json(&["--config", cfg, "thickness", "--shape", "ball:1", "--m", "1"]);
    assert_eq!(from_cfg["grid_resolution"], 64);
    let from_flag = ok_json(&["--config", cfg, "thickness", "--shape", "ball:1", "--m", "1", "--resolution", "32"]);
    assert_eq!(from_flag["grid_resolution"], 32);
    assert_eq!(from_flag["params_echo"]["resolution"], 32);
}

#[test]
fn thread_cap_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperthick"))
        .args(["nsphere", "--dim", "5"])
        .env("HYPERTHICK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = Command::new(env!("CARGO_BIN_EXE_hyperthick"))
        .args(["nsphere", "--dim", "5"])
        .env("HYPERTHICK_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
