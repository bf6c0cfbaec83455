//! Expands the Gaussian packet at rest at height 100 in bouncer
//! eigenstates and cross-checks the closed-form overlaps against direct
//! quadrature.

use bouncer_revivals::basis::auto_n_max;
use bouncer_revivals::{build_basis, coefficient_quadrature};

pub fn run_example() -> bouncer_revivals::Result<()> {
    let (z0, sigma) = (100.0, 1.0);
    let n_max = auto_n_max(z0, sigma)?;
    let basis = build_basis(z0, sigma, n_max)?;

    println!("n_max = {n_max}");
    println!("sum C_n^2 = {:.15}", basis.norm_sum());
    println!("<E> = {:.12}", basis.mean_energy());
    println!(
        "peak n = {}, state nearest z0 = {}",
        basis.peak_index(),
        basis.central_index()
    );
    println!(
        "largest |C_n| over the last 10 states = {:.3e}",
        basis.tail_max(10)
    );

    println!(
        "\n{:>4}  {:>12}  {:>22}  {:>22}",
        "n", "z_n", "closed form", "quadrature"
    );
    for n in [190, 205, 213, 215, 230, 300, 400] {
        let q = coefficient_quadrature(n, z0, sigma, basis.zero_table(), 1e-3)?;
        println!(
            "{n:>4}  {:>12.6}  {:>22.15e}  {:>22.15e}",
            basis.energy(n),
            basis.coefficient(n),
            q
        );
    }

    let worst = (0..=40)
        .map(|i| 96.0 + 0.2 * f64::from(i))
        .map(|z| {
            (basis.reconstruct(z) - bouncer_revivals::basis::gaussian_packet(z, z0, sigma)).abs()
        })
        .fold(0.0, f64::max);
    println!("\nreconstruction error on [96, 104]: {worst:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
