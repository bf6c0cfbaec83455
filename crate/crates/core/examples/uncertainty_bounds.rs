//! Evaluates every uncertainty relation (Rényi sum, Shannon sum, the
//! entropy-power products and the variance product) at a few times and
//! prints value, bound and slack.

use bouncer_revivals::runner::{format_bound_table, run_check};
use bouncer_revivals::ScenarioConfig;

pub fn run_example() -> bouncer_revivals::Result<()> {
    let config = ScenarioConfig::from_json(
        r#"{"z0": 25, "sigma": 1, "alphas": ["2/3", "4/5", 1], "check": {"times": [0, 3.7, 199.0, 398.0]}}"#,
    )?;
    let reports = run_check(&config)?;
    print!("{}", format_bound_table(&reports));
    let worst = reports
        .iter()
        .map(|r| r.min_slack())
        .fold(f64::INFINITY, f64::min);
    println!("smallest slack: {worst:.3e}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
