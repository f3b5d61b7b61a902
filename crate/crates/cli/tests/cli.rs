use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdl"))
        .args(args)
        .env_remove("BDL_JOBS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn csv_lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(String::from).collect()
}

#[test]
fn estimate_mode_count() {
    let v = json(&bdl(&["estimate", "--rho", "2", "--a", "0.005", "--R-trap", "35", "--L-box", "70"]));
    let n = v["outputs"]["mode_count"].as_f64().unwrap();
    assert!((n - 38.48).abs() < 5e-3, "{n}");
    assert_eq!(v["outputs"]["mode_count_rounded"].as_f64(), Some(38.0));
    assert!(v["timestamp"].as_str().unwrap().ends_with('Z'));
}

#[test]
fn asymptote_tonks_limit() {
    let v = json(&bdl(&["asymptote", "--dim", "1", "--formula", "hardcore1d", "--rho", "1", "--a", "0"]));
    let e = v["outputs"]["energy_density"].as_f64().unwrap();
    assert!((e - PI * PI / 3.0).abs() < 1e-14);
}

#[test]
fn asymptote_records_constants_note() {
    let v = json(&bdl(&["asymptote", "--formula", "wu", "--rho", "1e-6", "--a", "1"]));
    assert_eq!(v["inputs"]["dim"], 3);
    assert!(!v["provenance"]["notes"].as_array().unwrap().is_empty());
    let with = json(&bdl(&[
        "asymptote",
        "--formula",
        "wu",
        "--rho",
        "1e-6",
        "--a",
        "1",
        "--constants",
        r#"{"D": 1.0}"#,
    ]));
    assert_ne!(v["outputs"]["energy_density"], with["outputs"]["energy_density"]);
}

#[test]
fn scatter_hard_core() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("u.csv");
    let v = json(&bdl(&[
        "scatter",
        "--dim",
        "3",
        "--potential",
        r#"{"kind":"hardcore","R":1}"#,
        "--csv",
        csv.to_str().unwrap(),
    ]));
    assert!((v["outputs"]["a"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["outputs"]["R"].as_f64(), Some(1.0));
    let lines = csv_lines(&csv);
    assert_eq!(lines[0], "r,u");
    assert!(lines.len() > 10);
}

#[test]
fn scatter_tabulated_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("v.csv");
    fs::write(&table, "r,v\n0,10\n0.5,10\n1,10\n").unwrap();
    let from_csv = json(&bdl(&["scatter", "--potential", table.to_str().unwrap()]));
    let spec = dir.path().join("v.json");
    fs::write(&spec, r#"{"kind":"tabulated","file":"v.csv"}"#).unwrap();
    let from_json = json(&bdl(&["scatter", "--potential", spec.to_str().unwrap()]));
    let a = from_csv["outputs"]["a"].as_f64().unwrap();
    assert_eq!(Some(a), from_json["outputs"]["a"].as_f64());
    // constant table = soft sphere of height 10
    let k = 5f64.sqrt();
    assert!((a / (1.0 - k.tanh() / k) - 1.0).abs() < 1e-6, "{a}");
}

#[test]
fn echoed_inputs_reproduce_the_run() {
    let first = json(&bdl(&["scatter", "--potential", r#"{"kind":"gaussian","v0":3,"sigma":0.7}"#]));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, first["inputs"].to_string()).unwrap();
    let again = json(&bdl(&["scatter", "--config", cfg.to_str().unwrap()]));
    assert_eq!(first["outputs"], again["outputs"]);
    assert_eq!(first["inputs"], again["inputs"]);
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("est.json");
    fs::write(&cfg, r#"{"rho": 2, "a": 0.005, "r_trap": 35, "l_box": 70}"#).unwrap();
    let base = json(&bdl(&["estimate", "--config", cfg.to_str().unwrap()]));
    assert!((base["outputs"]["mode_count"].as_f64().unwrap() - 38.4845).abs() < 1e-4);
    let over = json(&bdl(&["estimate", "--config", cfg.to_str().unwrap(), "--rho", "4"]));
    assert!((over["outputs"]["mode_count"].as_f64().unwrap() - 2.0 * 38.4845).abs() < 1e-3);

    fs::write(&cfg, r#"{"subcommand": "scatter"}"#).unwrap();
    assert_eq!(code(&bdl(&["estimate", "--config", cfg.to_str().unwrap()])), 2);
    fs::write(&cfg, r#"{"rhoo": 1}"#).unwrap();
    assert_eq!(code(&bdl(&["estimate", "--config", cfg.to_str().unwrap()])), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&bdl(&["frobnicate"])), 64);
    assert_eq!(code(&bdl(&[])), 64);
    assert_eq!(code(&bdl(&["--help"])), 0);
    // input validation
    assert_eq!(code(&bdl(&["bog-min", "--rho", "-1"])), 2);
    assert_eq!(code(&bdl(&["asymptote", "--formula", "lhy", "--dim", "2", "--rho", "1e-6", "--a", "1"])), 2);
    assert_eq!(code(&bdl(&["asymptote", "--formula", "nonsense", "--rho", "1", "--a", "1"])), 2);
    assert_eq!(code(&bdl(&["scatter", "--dim", "2", "--potential", r#"{"kind":"delta1d","c":1}"#])), 2);
    assert_eq!(code(&bdl(&["lieb-liniger", "--gamma", "1", "--rho", "1", "--c", "1"])), 2);
    assert_eq!(code(&bdl(&["estimate", "--rho", "2"])), 2);
    // solver failure
    assert_eq!(code(&bdl(&["lieb-liniger", "--gamma", "0.01", "--nodes", "4"])), 3);
    assert_eq!(code(&bdl(&["lieb-liniger", "--gamma", "1e-4"])), 3);
}

#[test]
fn lieb_liniger_from_density_and_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let v = json(&bdl(&["lieb-liniger", "--rho", "0.5", "--c", "50", "--csv", csv.to_str().unwrap()]));
    let o = &v["outputs"];
    assert_eq!(o["gamma"].as_f64(), Some(100.0));
    let e = o["e_tilde"].as_f64().unwrap();
    assert!((o["energy_density"].as_f64().unwrap() - 0.125 * e).abs() < 1e-15);
    assert!(o["residual"].as_f64().unwrap() < 1e-9);
    let lines = csv_lines(&csv);
    assert_eq!(lines[0], "x,g");
    assert_eq!(lines.len(), 129);
}

#[test]
fn lieb_liniger_sweep_is_increasing() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ll.csv");
    json(&bdl(&[
        "lieb-liniger",
        "--from",
        "1",
        "--to",
        "1000",
        "--count",
        "5",
        "--csv",
        csv.to_str().unwrap(),
    ]));
    let lines = csv_lines(&csv);
    assert_eq!(lines[0], "gamma,lambda,e_tilde,residual");
    let e: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(e.len(), 5);
    assert!(e.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn bog_sweep_csv_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |jobs: &str, name: &str| {
        let path = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_bdl"))
            .args([
                "bog-sweep",
                "--from",
                "1e-7",
                "--to",
                "1e-6",
                "--count",
                "3",
                "--grid-nodes",
                "200",
                "--csv",
                path.to_str().unwrap(),
            ])
            .env("BDL_JOBS", jobs)
            .output()
            .unwrap();
        let record = json(&out);
        (fs::read_to_string(&path).unwrap(), record)
    };
    let (one, record) = run("1", "a.csv");
    let (three, _) = run("3", "b.csv");
    assert_eq!(one, three);
    let lines: Vec<_> = one.lines().collect();
    assert_eq!(lines[0], "rho_a3,e_over_4pi_rho2_a,depletion_fraction,iterations");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1e-7,"));
    assert_eq!(record["inputs"]["sweep"]["count"], 3);
    assert!(record["outputs"]["fit"]["slope"].as_f64().unwrap() > 4.0);
}

#[test]
fn bog_min_full_mode_rejects_explicit_length() {
    let out = bdl(&[
        "bog-min",
        "--rho",
        "1e-6",
        "--mode",
        "full",
        "--a",
        "1",
        "--potential",
        r#"{"kind":"soft_sphere","v0":10,"R":1}"#,
    ]);
    assert_eq!(code(&out), 2);
    assert_eq!(code(&bdl(&["bog-min", "--rho", "1e-6", "--mode", "full"])), 2);
}

#[test]
fn bog_min_scattering_constant() {
    let v = json(&bdl(&["bog-min", "--rho", "1e-6", "--grid-nodes", "200"]));
    let o = &v["outputs"];
    assert_eq!(o["mode"], "scattering-constant");
    let e = o["e_over_4pi_rho2_a"].as_f64().unwrap();
    assert!((e - o["lhy_prediction"].as_f64().unwrap()).abs() < 1e-4, "{e}");
    // stationarity is decided per node; some nodes sit at the roundoff floor
    let d = &o["diagnostics"];
    assert!(d["iterations"].as_u64().unwrap() >= 1);
    assert!(d["roundoff_limited_nodes"].as_u64().unwrap() < d["grid_nodes"].as_u64().unwrap());
}

#[test]
fn appendable_csv_keeps_one_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("e.csv");
    for rho in ["1e-6", "1e-5"] {
        json(&bdl(&["asymptote", "--formula", "lhy", "--rho", rho, "--a", "1", "--csv", csv.to_str().unwrap()]));
    }
    let lines = csv_lines(&csv);
    assert_eq!(lines[0], "formula,dim,rho,a,energy_density");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("lhy,3,1e-5,"));
    // a different schema is refused
    let out = bdl(&[
        "estimate", "--rho", "2", "--a", "0.005", "--R-trap", "35", "--L-box", "70", "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reproduce_subset() {
    let out = bdl(&["reproduce", "--only", "mode-count,hardcore-1d"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS mode-count"));
    assert!(text.contains("2 of 2 criteria passed"));
    assert_eq!(code(&bdl(&["reproduce", "--only", "nope"])), 2);
    let v = json(&bdl(&["reproduce", "--json", "--only", "lieb-liniger"]));
    assert_eq!(v["outputs"]["passed"], true);
}
