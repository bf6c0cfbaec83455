//! Position to momentum transform on the grid: a Gaussian keeps its
//! minimal widths, Parseval holds, and the outer band of the momentum grid
//! is reported as the aliasing diagnostic.

use bouncer_revivals::basis::gaussian_packet;
use bouncer_revivals::dynamics::to_momentum;
use bouncer_revivals::measures::variance;
use bouncer_revivals::{GridState, PositionGrid};
use num_complex::Complex64;

pub fn run_example() -> bouncer_revivals::Result<()> {
    let grid = PositionGrid::new(256.0, 4096)?;
    let psi: Vec<Complex64> = (0..grid.num_points())
        .map(|j| Complex64::new(gaussian_packet(grid.point(j), 100.0, 1.0), 0.0))
        .collect();
    let mut state = GridState::from_position(0.0, grid, psi)?;
    to_momentum(&mut state)?;

    let rho = state.position_density();
    let gamma = state.momentum_density();
    let var_z = variance(&state.position_view(&rho))?;
    let var_p = variance(&state.momentum_view(&gamma))?;
    println!(
        "dz = {}, dp = {:.6}, p range [{:.4}, {:.4})",
        grid.spacing(),
        grid.momentum_spacing(),
        grid.momentum_min(),
        -grid.momentum_min()
    );
    println!(
        "norms: position {:.15}, momentum {:.15}",
        state.position_norm(),
        state.momentum_norm()
    );
    println!(
        "sigma_z = {:.12}, sigma_p = {:.12}, product = {:.12}",
        var_z.sqrt(),
        var_p.sqrt(),
        (var_z * var_p).sqrt()
    );
    println!(
        "outer-band probability = {:.3e}",
        state.outer_band_probability()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
