//! Time scan of all uncertainty products over one revival time, with the
//! detected minima labeled by the fraction p/q of T_rev they fall on.
//!
//! The built-in scenario drops a packet from z0 = 25 so the scan takes a
//! few seconds. Pass a scenario file to scan something else, e.g. `{}` for
//! the full default packet at z0 = 100:
//!
//! `cargo run --release --example revival_scan -- scenario.json`

use bouncer_revivals::runner::run_scan;
use bouncer_revivals::ScenarioConfig;
use std::path::Path;

const BUILT_IN: &str = r#"{"z0": 25, "sigma": 1, "scan": {"num_samples": 2048}}"#;

pub fn run_example() -> bouncer_revivals::Result<()> {
    let config = match std::env::args().nth(1) {
        Some(path) if path.ends_with(".json") => ScenarioConfig::from_path(Path::new(&path))?,
        _ => ScenarioConfig::from_json(BUILT_IN)?,
    };
    let out = std::env::temp_dir().join(format!("bouncer-revival-scan-{}", std::process::id()));
    let run = run_scan(&config, &out)?;
    let tl = &run.timeline;
    println!(
        "T_cl = {:.4}  T_rev = {:.3}  T_rev(fd) = {:.3}",
        tl.t_cl, tl.t_rev, tl.t_rev_fd
    );

    for name in tl.diagnostic_names() {
        let minima = tl.minima_for(&name).unwrap_or_default();
        let mut labels: Vec<String> = minima
            .iter()
            .filter_map(|m| m.fraction.map(|f| f.to_string()))
            .collect();
        labels.dedup();
        println!(
            "{name:<28} {:>4} minima; fractions hit: {}",
            minima.len(),
            labels.join(" ")
        );
    }
    for f in &run.files {
        println!("wrote {}", f.display());
    }
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
