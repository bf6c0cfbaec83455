//! Ai and Ai' across the three evaluation regions, and the first zeros of
//! Ai with the derivative magnitudes that normalize the bouncer states.

use bouncer_revivals::airy::zero_estimate;
use bouncer_revivals::{airy_ai, airy_ai_prime, airy_zeros};

pub fn run_example() -> bouncer_revivals::Result<()> {
    println!("{:>8}  {:>24}  {:>24}", "x", "Ai(x)", "Ai'(x)");
    for x in [-40.0, -10.5, -2.0, 0.0, 1.0, 5.0, 9.5, 20.0] {
        println!(
            "{x:>8}  {:>24.16e}  {:>24.16e}",
            airy_ai(x)?,
            airy_ai_prime(x)?
        );
    }

    let table = airy_zeros(500)?;
    println!(
        "\n{:>5}  {:>20}  {:>20}  {:>10}",
        "n", "z_n", "|Ai'(-z_n)|", "z_n - est"
    );
    for n in [1, 2, 3, 10, 100, 213, 500] {
        println!(
            "{n:>5}  {:>20.15}  {:>20.15}  {:>10.2e}",
            table.zero(n),
            table.derivative_magnitude(n),
            table.zero(n) - zero_estimate(n)
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
