//! Truncated Airy eigenbasis of the quantum bouncer and the expansion of a
//! Gaussian packet released from rest at height `z0`.
//!
//! Eigenstates are `φ_n(z) = Ai(z - z_n) / |Ai'(-z_n)|` with energy `z_n`.
//! The packet `Ψ(z, 0) = (2/πσ²)^{1/4} exp(-(z - z0)²/σ²)` has overlaps
//!
//! ```text
//! C_n = (2πσ²)^{1/4} / |Ai'(-z_n)| · exp[(σ²/4)(z0 - z_n + σ⁴/24)] · Ai(z0 - z_n + σ⁴/16)
//! ```
//!
//! which are cross-checked against direct quadrature of `<φ_n|Ψ>`.

use crate::airy::{self, airy_zeros, AiryZeroTable};
use crate::error::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Completeness tolerance on `|1 - Σ C_n²|`.
pub const COMPLETENESS_TOL: f64 = 1e-6;
/// Largest tolerated relative gap between closed form and quadrature.
pub const CROSS_CHECK_TOL: f64 = 1e-4;
/// Quadrature step used for the build-time spot checks.
pub const SPOT_CHECK_DZ: f64 = 2e-3;
const SPOT_CHECKS: usize = 20;

#[derive(Clone, Debug)]
pub struct BouncerBasis {
    zero_table: AiryZeroTable,
    coefficients: Vec<f64>,
    z0: f64,
    sigma: f64,
}

/// One row of the spectrum dump.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: usize,
    pub z_n: f64,
    #[serde(rename = "N_n")]
    pub norm: f64,
    #[serde(rename = "C_n")]
    pub coefficient: f64,
}

/// Classical period and revival times of a built basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeScales {
    /// State used for the finite differences.
    pub n0: usize,
    /// `2π / |E'(n0)|` from the centered first difference.
    pub t_cl: f64,
    /// `4π / |E''(n0)|` from the centered second difference.
    pub t_rev_fd: f64,
    /// `4 z0² / π`, the revival time that anchors fractional-revival labels.
    pub t_rev: f64,
}

impl BouncerBasis {
    pub fn zero_table(&self) -> &AiryZeroTable {
        &self.zero_table
    }

    pub fn n_max(&self) -> usize {
        self.coefficients.len()
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Initial momentum; always zero for the packets built here.
    pub fn p0(&self) -> f64 {
        0.0
    }

    /// Energies `E_n = z_n`, index 0 holding `n = 1`.
    pub fn energies(&self) -> &[f64] {
        self.zero_table.zeros()
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.zero_table.zero(n)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> f64 {
        self.coefficients[n - 1]
    }

    pub fn norm_sum(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }

    /// `argmax |C_n|`, ties resolved toward the smaller `n`.
    pub fn peak_index(&self) -> usize {
        let mut best = 0;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.abs() > self.coefficients[best].abs() {
                best = i;
            }
        }
        best + 1
    }

    /// State whose energy is closest to the classical packet energy `z0`.
    pub fn central_index(&self) -> usize {
        let mut best = 0;
        let zeros = self.energies();
        for (i, z) in zeros.iter().enumerate() {
            if (z - self.z0).abs() < (zeros[best] - self.z0).abs() {
                best = i;
            }
        }
        best + 1
    }

    /// `Σ |C_n|² E_n`.
    pub fn mean_energy(&self) -> f64 {
        self.coefficients
            .iter()
            .zip(self.energies())
            .map(|(c, e)| c * c * e)
            .sum()
    }

    /// `Σ |C_n|`, an upper bound on `|∂ψ/∂z|` at the floor for all times.
    pub fn wall_slope_bound(&self) -> f64 {
        self.coefficients.iter().map(|c| c.abs()).sum()
    }

    /// Largest `|C_n|` among the last `window` states.
    pub fn tail_max(&self, window: usize) -> f64 {
        let start = self.coefficients.len().saturating_sub(window);
        self.coefficients[start..]
            .iter()
            .fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Normalized eigenfunction `φ_n(z)`.
    pub fn eigenfunction(&self, n: usize, z: f64) -> f64 {
        self.zero_table.normalization(n) * airy::ai(z - self.zero_table.zero(n))
    }

    /// `Σ C_n φ_n(z)` at `t = 0`.
    pub fn reconstruct(&self, z: f64) -> f64 {
        (1..=self.n_max())
            .map(|n| self.coefficient(n) * self.eigenfunction(n, z))
            .sum()
    }

    pub fn spectrum_rows(&self) -> Vec<SpectrumRow> {
        (1..=self.n_max())
            .map(|n| SpectrumRow {
                n,
                z_n: self.energy(n),
                norm: self.zero_table.normalization(n),
                coefficient: self.coefficient(n),
            })
            .collect()
    }
}

/// The initial packet `Ψ(z, 0)`.
pub fn gaussian_packet(z: f64, z0: f64, sigma: f64) -> f64 {
    let d = (z - z0) / sigma;
    (2.0 / (PI * sigma * sigma)).powf(0.25) * (-d * d).exp()
}

fn validate_packet(z0: f64, sigma: f64) -> Result<()> {
    if !(z0.is_finite() && z0 > 0.0) {
        return Err(Error::Domain(format!("z0 must be positive, got {z0}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::Domain(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    Ok(())
}

fn check_index(n: usize, table: &AiryZeroTable) -> Result<()> {
    if n == 0 || n > table.len() {
        return Err(Error::Domain(format!(
            "state index {n} outside 1..={}",
            table.len()
        )));
    }
    Ok(())
}

/// Closed-form overlap `C_n`, assembled in log-magnitude form so that the
/// exponential prefactor and the decaying Airy factor cancel before
/// exponentiation.
pub fn coefficient_closed_form(
    n: usize,
    z0: f64,
    sigma: f64,
    table: &AiryZeroTable,
) -> Result<f64> {
    validate_packet(z0, sigma)?;
    check_index(n, table)?;
    let s2 = sigma * sigma;
    let s4 = s2 * s2;
    let shift = z0 - table.zero(n);
    let (ai_scaled, zeta) = airy::ai_scaled(shift + s4 / 16.0);
    if ai_scaled == 0.0 {
        return Ok(0.0);
    }
    let log_mag = 0.25 * (2.0 * PI * s2).ln() - table.derivative_magnitude(n).ln()
        + 0.25 * s2 * (shift + s4 / 24.0)
        + ai_scaled.abs().ln()
        - zeta;
    if log_mag > f64::MAX.ln() {
        return Err(Error::Overflow {
            n,
            log_magnitude: log_mag,
        });
    }
    Ok(ai_scaled.signum() * log_mag.exp())
}

/// `∫_0^{z_n+15} φ_n(z) Ψ(z, 0) dz` by the composite trapezoid rule with
/// step at most `dz`. The integration range is clipped to `z0 ± 9σ`, outside
/// of which the Gaussian is below `1e-35`.
pub fn coefficient_quadrature(
    n: usize,
    z0: f64,
    sigma: f64,
    table: &AiryZeroTable,
    dz: f64,
) -> Result<f64> {
    validate_packet(z0, sigma)?;
    check_index(n, table)?;
    if !(dz.is_finite() && dz > 0.0) {
        return Err(Error::Domain(format!(
            "quadrature step must be positive, got {dz}"
        )));
    }
    let zn = table.zero(n);
    let lo = (z0 - 9.0 * sigma).max(0.0);
    let hi = (z0 + 9.0 * sigma).min(zn + 15.0);
    if hi <= lo {
        return Ok(0.0);
    }
    let intervals = ((hi - lo) / dz).ceil().max(1.0) as usize;
    let h = (hi - lo) / intervals as f64;
    let norm = table.normalization(n);
    let integrand = |z: f64| norm * airy::ai(z - zn) * gaussian_packet(z, z0, sigma);
    let mut sum = 0.5 * (integrand(lo) + integrand(hi));
    for i in 1..intervals {
        sum += integrand(lo + h * i as f64);
    }
    Ok(sum * h)
}

/// Builds the basis with closed-form coefficients, then verifies
/// completeness and spot-checks the 20 largest coefficients by quadrature.
pub fn build_basis(z0: f64, sigma: f64, n_max: usize) -> Result<BouncerBasis> {
    validate_packet(z0, sigma)?;
    if n_max < 3 {
        return Err(Error::Domain(format!(
            "n_max must be at least 3, got {n_max}"
        )));
    }
    let table = airy_zeros(n_max)?;
    let coefficients = (1..=n_max)
        .into_par_iter()
        .map(|n| coefficient_closed_form(n, z0, sigma, &table))
        .collect::<Result<Vec<_>>>()?;
    let basis = BouncerBasis {
        zero_table: table,
        coefficients,
        z0,
        sigma,
    };

    let achieved = basis.norm_sum();
    let deficit = 1.0 - achieved;
    if deficit.abs() > COMPLETENESS_TOL {
        return Err(Error::Truncation {
            n_max,
            achieved,
            deficit,
        });
    }

    let mut order: Vec<usize> = (1..=n_max).collect();
    order.sort_by(|&a, &b| {
        basis
            .coefficient(b)
            .abs()
            .total_cmp(&basis.coefficient(a).abs())
    });
    order.truncate(SPOT_CHECKS);
    order.into_par_iter().try_for_each(|n| {
        let closed_form = basis.coefficient(n);
        let quadrature = coefficient_quadrature(n, z0, sigma, &basis.zero_table, SPOT_CHECK_DZ)?;
        if (closed_form - quadrature).abs() > CROSS_CHECK_TOL * closed_form.abs() {
            return Err(Error::Consistency {
                n,
                closed_form,
                quadrature,
            });
        }
        Ok(())
    })?;
    Ok(basis)
}

/// Smallest `n_max` that keeps the expansion complete to `1e-12` with all
/// of the last ten coefficients below `1e-8`. Starts from the index where
/// `z_n = z0 + 12 max(σ, 1/σ)`, plus 50, rounded up to a multiple of 50, and
/// grows in steps of 50.
pub fn auto_n_max(z0: f64, sigma: f64) -> Result<usize> {
    validate_packet(z0, sigma)?;
    let target = z0 + 12.0 * sigma.max(1.0 / sigma);
    // invert z_n ≈ [3π(n - 1/4)/2]^{2/3}
    let n_target = (target.powf(1.5) / (1.5 * PI) + 0.25).ceil() as usize;
    let mut n_max = (n_target + 50).div_ceil(50) * 50;
    loop {
        let table = airy_zeros(n_max)?;
        let coefficients = (1..=n_max)
            .into_par_iter()
            .map(|n| coefficient_closed_form(n, z0, sigma, &table))
            .collect::<Result<Vec<_>>>()?;
        let sum: f64 = coefficients.iter().map(|c| c * c).sum();
        let tail = coefficients[n_max - 10..]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        if (1.0 - sum).abs() < 1e-12 && tail < 1e-8 {
            return Ok(n_max);
        }
        if n_max > 200_000 {
            return Err(Error::Domain(format!(
                "no adequate truncation found below n_max = {n_max}"
            )));
        }
        n_max += 50;
    }
}

/// Finite-difference time scales around the state closest to `z0`.
pub fn estimate_time_scales(basis: &BouncerBasis) -> Result<TimeScales> {
    let n0 = basis.central_index();
    if n0 < 2 || n0 + 1 > basis.n_max() {
        return Err(Error::PeakAtBoundary {
            n0,
            n_max: basis.n_max(),
        });
    }
    let (em, e0, ep) = (basis.energy(n0 - 1), basis.energy(n0), basis.energy(n0 + 1));
    let first = 0.5 * (ep - em);
    let second = ep - 2.0 * e0 + em;
    Ok(TimeScales {
        n0,
        t_cl: 2.0 * PI / first.abs(),
        t_rev_fd: 4.0 * PI / second.abs(),
        t_rev: revival_time(basis.z0),
    })
}

/// `4 z0² / π`.
pub fn revival_time(z0: f64) -> f64 {
    4.0 * z0 * z0 / PI
}

/// `2 √z0`.
pub fn classical_period(z0: f64) -> f64 {
    2.0 * z0.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        let table = airy_zeros(5).unwrap();
        assert!(coefficient_closed_form(0, 10.0, 1.0, &table).is_err());
        assert!(coefficient_closed_form(6, 10.0, 1.0, &table).is_err());
        assert!(coefficient_closed_form(1, 10.0, 0.0, &table).is_err());
        assert!(coefficient_quadrature(1, 10.0, 1.0, &table, 0.0).is_err());
        assert!(build_basis(-1.0, 1.0, 50).is_err());
    }

    #[test]
    fn vanishing_overlap_quadrature_is_zero() {
        let table = airy_zeros(10).unwrap();
        // z_1 + 15 < z0 - 9σ: the integration window is empty
        let c = coefficient_quadrature(1, 100.0, 1.0, &table, 1e-3).unwrap();
        assert!(c.abs() < 1e-14);
    }

    #[test]
    fn too_small_truncation_is_reported() {
        match build_basis(100.0, 1.0, 220) {
            Err(Error::Truncation { n_max, deficit, .. }) => {
                assert_eq!(n_max, 220);
                assert!(deficit > 1e-6);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn small_packet_completes() {
        let basis = build_basis(10.0, 1.0, auto_n_max(10.0, 1.0).unwrap()).unwrap();
        assert!((basis.norm_sum() - 1.0).abs() < 1e-10);
        assert!((basis.mean_energy() - 11.0).abs() < 1e-6);
    }

    #[test]
    fn gaussian_is_normalized() {
        let h = 1e-3;
        let s: f64 = (0..20_000)
            .map(|i| gaussian_packet(i as f64 * h, 10.0, 1.0).powi(2))
            .sum::<f64>()
            * h;
        assert!((s - 1.0).abs() < 1e-12);
    }
}
