//! Rényi and Shannon entropies of sampled densities, and the entropy
//! powers built from them, checked on a Gaussian whose values are known in
//! closed form.

use bouncer_revivals::measures::{entropy_power, renyi_entropy, shannon_entropy, variance};
use bouncer_revivals::SampledDensity;
use std::f64::consts::PI;

pub fn run_example() -> bouncer_revivals::Result<()> {
    let s = 0.5;
    let dx = 1e-3;
    let values: Vec<f64> = (0..=12_000)
        .map(|j| {
            let x = -6.0 + dx * f64::from(j);
            (-x * x / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt())
        })
        .collect();
    let rho = SampledDensity::new(&values, -6.0, dx);

    let shannon = shannon_entropy(&rho)?;
    println!(
        "Shannon: {shannon:.12}  exact {:.12}",
        0.5 * (2.0 * PI * std::f64::consts::E * s * s).ln()
    );
    for alpha in [2.0 / 3.0, 0.8, 2.0] {
        let r = renyi_entropy(&rho, alpha)?;
        let exact = 0.5 * (2.0 * PI * s * s).ln() + alpha.ln() / (2.0 * (alpha - 1.0));
        println!("R({alpha:.4}): {r:.12}  exact {exact:.12}");
    }
    let var = variance(&rho)?;
    for alpha in [2.0 / 3.0, 0.8, 1.0] {
        let r = if alpha == 1.0 {
            shannon
        } else {
            renyi_entropy(&rho, alpha)?
        };
        println!(
            "N({alpha:.4}) / variance = {:.10}",
            entropy_power(r, alpha)? / var
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
