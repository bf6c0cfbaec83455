//! Gaussian wave packets in the gravitational quantum bouncer: spectral
//! time evolution, Rényi/Shannon entropies and entropy powers in position
//! and momentum space, the associated uncertainty products, and detection
//! of full and fractional revivals as minima of those products.
//!
//! All quantities are dimensionless: heights in units of the gravitational
//! length, energies in `m g l_g`, `ħ = 1`. The Hamiltonian reads
//! `H = p² + z` on `z > 0` with a hard wall at the floor.

pub mod airy;
pub mod basis;
pub mod dynamics;
pub mod error;
pub mod measures;
pub mod output;
pub mod revival;
pub mod runner;
pub mod scenario;

pub use airy::{airy_ai, airy_ai_prime, airy_zeros, AiryZeroTable};
pub use basis::{
    build_basis, coefficient_closed_form, coefficient_quadrature, BouncerBasis, TimeScales,
};
pub use dynamics::{autocorrelation, GridState, PositionGrid, Propagator};
pub use error::{Error, Result};
pub use measures::{AlphaPair, BoundReport, MeasureSample, SampledDensity};
pub use revival::{Fraction, RevivalTimeline};
pub use scenario::ScenarioConfig;
