//! End-to-end runs of the `bouncer` binary on small drops.

use bouncer_revivals::output::read_spectrum_json;
use serde_json::Value;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;

const SMALL: &str = r#"{
    "z0": 10,
    "sigma": 1,
    "alphas": ["2/3", "4/5", 1],
    "scan": {"t_end": 160, "num_samples": 96},
    "check": {"times": [0, 7.3, 63.66]},
    "snapshot": {"times": [0, 3.25]}
}"#;

fn bouncer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bouncer"))
        .args(args)
        .output()
        .expect("bouncer binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.json");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn run_ok(args: &[&str]) -> String {
    let out = bouncer(args);
    assert!(
        out.status.success(),
        "bouncer {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const HEADER: &str = "t,S_rho,S_gamma,shannon_sum,\
R_rho_a0.6667,R_gamma_b2.0000,renyi_sum_a0.6667,N_rho_a0.6667,N_gamma_a0.6667,\
R_rho_a0.8000,R_gamma_b1.3333,renyi_sum_a0.8000,N_rho_a0.8000,N_gamma_a0.8000,\
R_rho_a1.0000,R_gamma_b1.0000,renyi_sum_a1.0000,N_rho_a1.0000,N_gamma_a1.0000,\
var_rho,var_gamma,\
prod_Nrho_vargamma_a0.6667,prod_Ngamma_varrho_a0.6667,prod_Nrho_Ngamma_a0.6667,\
prod_Nrho_vargamma_a0.8000,prod_Ngamma_varrho_a0.8000,prod_Nrho_Ngamma_a0.8000,\
prod_Nrho_vargamma_a1.0000,prod_Ngamma_varrho_a1.0000,prod_Nrho_Ngamma_a1.0000,\
stddev_product,autocorr_abs";

#[test]
fn scan_writes_timeline_minima_and_manifest() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out = dir.path().join("a");
    let stdout = run_ok(&["scan", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(stdout.contains("timeline.csv"));

    let timeline = fs::read_to_string(out.join("timeline.csv")).unwrap();
    let mut lines = timeline.lines();
    assert_eq!(lines.next().unwrap(), HEADER);
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 96);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[95][0], 160.0);
    assert!(rows.iter().all(|r| r.len() == HEADER.split(',').count()));
    // at t = 0 the Shannon sum sits at 1 + ln π
    assert!((rows[0][3] - (1.0 + std::f64::consts::PI.ln())).abs() < 1e-3);

    let minima = read_json(&out.join("minima.json"));
    for key in ["t_rev", "t_rev_fd", "t_cl"] {
        assert!(minima[key].as_f64().unwrap() > 0.0, "{key}");
    }
    let diagnostics = minima["diagnostics"].as_object().unwrap();
    assert!(diagnostics.contains_key("stddev_product"));
    assert!(diagnostics.contains_key("prod_Nrho_vargamma_a0.6667"));
    assert!(!diagnostics.contains_key("renyi_sum_a1.0000"));
    for entries in diagnostics.values() {
        for m in entries.as_array().unwrap() {
            assert!(m["t"].is_f64() && m["value"].is_f64());
            assert!(m["fraction"].is_null() || m["fraction"].as_str().unwrap().contains('/'));
        }
    }

    let manifest = read_json(&out.join("manifest.json"));
    assert_eq!(manifest["command"], "scan");
    assert_eq!(manifest["resolved"]["num_samples"], 96);
    assert_eq!(manifest["config"]["z0"], 10.0);
    assert_eq!(manifest["files"].as_array().unwrap().len(), 3);
}

#[test]
fn scans_are_reproducible_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), SMALL);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run_ok(&[
        "scan",
        "--config",
        &config,
        "--out",
        a.to_str().unwrap(),
        "--threads",
        "1",
    ]);
    run_ok(&[
        "scan",
        "--config",
        &config,
        "--out",
        b.to_str().unwrap(),
        "--threads",
        "3",
    ]);
    for name in ["timeline.csv", "minima.json"] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let strip = |mut v: Value| {
        for key in ["started_unix", "finished_unix", "threads"] {
            v.as_object_mut().unwrap().remove(key);
        }
        v
    };
    assert_eq!(
        strip(read_json(&a.join("manifest.json"))),
        strip(read_json(&b.join("manifest.json")))
    );
}

#[test]
fn spectrum_round_trips_the_default_basis() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), "{}");
    run_ok(&[
        "spectrum",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let rows =
        read_spectrum_json(&fs::read_to_string(dir.path().join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(rows.len(), 500);
    assert!(rows.iter().enumerate().all(|(i, r)| r.n == i + 1));
    assert!((rows[0].z_n - 2.338_107_410_459_767).abs() < 1e-12);
    let sum: f64 = rows.iter().map(|r| r.coefficient * r.coefficient).sum();

    let manifest = read_json(&dir.path().join("manifest.json"));
    assert_eq!(manifest["basis"]["sum_c2"].as_f64().unwrap(), sum);
    assert!((sum - 1.0).abs() < 1e-12);
    assert_eq!(manifest["basis"]["peak_n"], 215);
}

#[test]
fn check_prints_a_bound_table_and_exits_cleanly() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), SMALL);
    let table = run_ok(&["check", "--config", &config]);
    assert!(!table.contains("VIOLATED"));
    // per time: Shannon sum, two width rows, four entropy-power rows per
    // index and a Rényi sum for each index below one
    let rows = table.lines().count() - 1;
    assert_eq!(rows, 3 * (1 + 2 + 3 * 4 + 2));
    let first = table.lines().nth(1).unwrap();
    assert!(first.trim_start().starts_with('0'));
}

#[test]
fn snapshot_writes_position_and_momentum_tables() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out = dir.path();
    run_ok(&[
        "snapshot",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
    ]);
    for t in ["0", "3.25"] {
        let pos = fs::read_to_string(out.join(format!("snapshot_{t}.csv"))).unwrap();
        assert_eq!(pos.lines().next().unwrap(), "z,re_psi,im_psi,rho");
        let mom = fs::read_to_string(out.join(format!("snapshot_{t}_momentum.csv"))).unwrap();
        assert_eq!(mom.lines().next().unwrap(), "p,re_phi,im_phi,gamma");
        assert_eq!(pos.lines().count(), mom.lines().count());
    }
    run_ok(&[
        "snapshot",
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "--time",
        "1.5",
    ]);
    assert!(out.join("snapshot_1.5.csv").exists());
}

#[test]
fn moving_packets_and_bad_configs_are_rejected() {
    let dir = TempDir::new().unwrap();
    let config = write_config(dir.path(), r#"{"p0": 0.5}"#);
    let out = bouncer(&[
        "scan",
        "--config",
        &config,
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("p0"), "{stderr}");
    assert!(!dir.path().join("timeline.csv").exists());

    for bad in [
        r#"{"alphas": [0.4]}"#,
        r#"{"sigma": 0}"#,
        r#"{"grid": {"num_points": 1000}}"#,
        r#"{"zz": 1}"#,
    ] {
        let config = write_config(dir.path(), bad);
        let out = bouncer(&[
            "spectrum",
            "--config",
            &config,
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(!out.status.success(), "{bad}");
    }
    assert!(
        !bouncer(&["scan", "--config", "/nonexistent/scenario.json"])
            .status
            .success()
    );
}
