//! Spectral time evolution of a packet dropped from z0 = 25: position and
//! momentum norms, the outer-band diagnostic, and the autocorrelation
//! computed spectrally and as a grid overlap.

use bouncer_revivals::ScenarioConfig;
use bouncer_revivals::{autocorrelation, Propagator};

pub fn run_example() -> bouncer_revivals::Result<()> {
    let config = ScenarioConfig::from_json(r#"{"z0": 25, "sigma": 1}"#)?;
    let prepared = config.prepare()?;
    let r = &prepared.resolved;
    println!(
        "n_max = {}, grid = {} points on [0, {})",
        r.n_max, r.num_points, r.z_max
    );

    let propagator = Propagator::new(&prepared.basis, prepared.grid)?;
    let initial = propagator.evolve_to(0.0)?;
    let t_rev = prepared.scales.t_rev;
    println!(
        "{:>10}  {:>16}  {:>16}  {:>10}  {:>12}  {:>12}",
        "t", "norm z", "norm p", "outer", "|A| spectral", "|A| grid"
    );
    for t in [0.0, 0.25 * t_rev, 0.5 * t_rev, t_rev] {
        let state = propagator.evolve_to(t)?;
        println!(
            "{t:>10.3}  {:>16.13}  {:>16.13}  {:>10.2e}  {:>12.9}  {:>12.9}",
            state.position_norm(),
            state.momentum_norm(),
            state.outer_band_probability(),
            autocorrelation(&prepared.basis, t).norm(),
            initial.overlap(&state).norm()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
