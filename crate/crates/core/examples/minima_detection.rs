//! Minima detection on a two-scale signal: a slow envelope with a fast
//! ripple. Smoothing over one ripple period leaves only the envelope
//! minima, which are then labeled with the nearest fraction p/q of the
//! revival time.

use bouncer_revivals::revival::{detect_minima, fractional_revival_times, match_fractions};
use std::f64::consts::PI;

pub fn run_example() -> bouncer_revivals::Result<()> {
    let t_rev = 1000.0;
    let ripple = 10.0;
    let dt = 1.0;
    let series: Vec<(f64, f64)> = (100..=1050)
        .map(|i| {
            let t = dt * f64::from(i);
            let envelope = 1.0 + (4.0 * PI * t / t_rev).cos();
            let v = 2.0 - 0.5 * envelope + 0.05 * (2.0 * PI * t / ripple).sin();
            (t, v)
        })
        .collect();

    let window = (ripple / dt).round() as usize | 1;
    let minima = detect_minima(&series, window, 0.02)?;
    let fractions = fractional_revival_times(t_rev, 4);
    for m in match_fractions(&minima, &fractions, 0.02 * t_rev) {
        let label = m
            .fraction
            .map(|f| f.to_string())
            .unwrap_or_else(|| "-".into());
        println!("t = {:8.3}  value = {:.6}  fraction {label}", m.t, m.value);
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
