//! Scenario configuration: `auto` fields, fractional index strings, the
//! resolved parameters echoed in every manifest, and the spectrum and
//! snapshot exports.

use bouncer_revivals::output::read_spectrum_json;
use bouncer_revivals::runner::{run_snapshot, run_spectrum};
use bouncer_revivals::ScenarioConfig;

const SCENARIO: &str = r#"{
    "z0": 25,
    "sigma": 1,
    "alphas": ["2/3", 0.8],
    "n_max": "auto",
    "grid": {"z_max": "auto", "num_points": "auto"},
    "snapshot": {"times": [0, 12.5]}
}"#;

pub fn run_example() -> bouncer_revivals::Result<()> {
    let config = ScenarioConfig::from_json(SCENARIO)?;
    let prepared = config.prepare()?;
    println!("{}", serde_json::to_string_pretty(&prepared.resolved)?);

    let out = std::env::temp_dir().join(format!("bouncer-scenario-{}", std::process::id()));
    let spectrum = run_spectrum(&config, &out)?;
    let rows = read_spectrum_json(&std::fs::read_to_string(&spectrum)?)?;
    println!("spectrum.json: {} rows, first {:?}", rows.len(), rows[0]);
    for f in run_snapshot(&config, &out, None)? {
        let lines = std::fs::read_to_string(&f)?.lines().count();
        println!(
            "{}: {lines} lines",
            f.file_name().unwrap_or_default().to_string_lossy()
        );
    }

    let rejected = ScenarioConfig::from_json(r#"{"p0": 0.5}"#);
    println!(
        "p0 = 0.5 -> {}",
        rejected.err().map(|e| e.to_string()).unwrap_or_default()
    );
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
