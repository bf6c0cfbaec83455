//! Classical period and revival time from finite differences of the
//! spectrum, next to their semiclassical values.

use bouncer_revivals::basis::{classical_period, estimate_time_scales, revival_time};
use bouncer_revivals::build_basis;
use std::f64::consts::PI;

pub fn run_example() -> bouncer_revivals::Result<()> {
    println!(
        "{:>6}  {:>5}  {:>10}  {:>10}  {:>12}  {:>12}  {:>12}",
        "z0", "n0", "T_cl", "2 sqrt(z0)", "T_rev (fd)", "8 z0^2/pi", "4 z0^2/pi"
    );
    for (z0, n_max) in [(25.0, 150), (50.0, 250), (100.0, 500)] {
        let basis = build_basis(z0, 1.0, n_max)?;
        let s = estimate_time_scales(&basis)?;
        println!(
            "{z0:>6}  {:>5}  {:>10.5}  {:>10.5}  {:>12.2}  {:>12.2}  {:>12.2}",
            s.n0,
            s.t_cl,
            classical_period(z0),
            s.t_rev_fd,
            8.0 * z0 * z0 / PI,
            revival_time(z0)
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
