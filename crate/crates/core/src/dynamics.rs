//! Spectral time evolution on a uniform position grid, the transform to
//! momentum space, and the autocorrelation function.

use crate::airy;
use crate::basis::BouncerBasis;
use crate::error::{Error, Result};
use crate::measures::SampledDensity;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Largest tolerated `|ψ|` at the top of the grid.
pub const BOUNDARY_TOL: f64 = 1e-6;
/// Largest tolerated probability in the outer 10% of the momentum band.
pub const ALIASING_TOL: f64 = 1e-8;

// States with |C_n| below this fraction of the largest one, and eigenfunction
// samples below this magnitude, do not contribute at double precision.
const COEFF_CUTOFF: f64 = 1e-17;
const SAMPLE_CUTOFF: f64 = 1e-20;

/// Uniform grid `z_j = j · dz`, `j = 0..num_points`, covering `[0, z_max)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PositionGrid {
    z_max: f64,
    num_points: usize,
}

impl PositionGrid {
    pub fn new(z_max: f64, num_points: usize) -> Result<Self> {
        if !(z_max.is_finite() && z_max > 0.0) {
            return Err(Error::Domain(format!(
                "z_max must be positive, got {z_max}"
            )));
        }
        if num_points < 1024 || !num_points.is_power_of_two() {
            return Err(Error::Domain(format!(
                "num_points must be a power of two >= 1024, got {num_points}"
            )));
        }
        Ok(PositionGrid { z_max, num_points })
    }

    /// Checks that the grid leaves room above a packet released at `z0`.
    pub fn check_covers(&self, z0: f64, sigma: f64) -> Result<()> {
        let needed = (z0 + 12.0 * sigma.max(1.0)).max(2.0 * z0);
        if self.z_max < needed {
            return Err(Error::Domain(format!(
                "z_max = {} is below the required {needed} for z0 = {z0}, sigma = {sigma}",
                self.z_max
            )));
        }
        Ok(())
    }

    pub fn z_max(&self) -> f64 {
        self.z_max
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn spacing(&self) -> f64 {
        self.z_max / self.num_points as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    /// Same extent, twice the points.
    pub fn refined(&self) -> PositionGrid {
        PositionGrid {
            z_max: self.z_max,
            num_points: 2 * self.num_points,
        }
    }

    pub fn momentum_spacing(&self) -> f64 {
        2.0 * PI / self.z_max
    }

    /// `-π/dz`, the first momentum sample.
    pub fn momentum_min(&self) -> f64 {
        -PI / self.spacing()
    }
}

/// Wavefunction at one time in both representations.
#[derive(Clone, Debug)]
pub struct GridState {
    pub time: f64,
    grid: PositionGrid,
    position: Vec<Complex64>,
    momentum: Vec<Complex64>,
}

impl GridState {
    /// Wraps position-space samples; the momentum side starts empty.
    pub fn from_position(time: f64, grid: PositionGrid, position: Vec<Complex64>) -> Result<Self> {
        if position.len() != grid.num_points() {
            return Err(Error::Domain(format!(
                "expected {} samples, got {}",
                grid.num_points(),
                position.len()
            )));
        }
        Ok(GridState {
            time,
            grid,
            position,
            momentum: Vec::new(),
        })
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    pub fn position_amplitudes(&self) -> &[Complex64] {
        &self.position
    }

    /// Empty until [`to_momentum`] has run.
    pub fn momentum_amplitudes(&self) -> &[Complex64] {
        &self.momentum
    }

    pub fn has_momentum(&self) -> bool {
        !self.momentum.is_empty()
    }

    /// `p_k = -π/dz + k · 2π/(N dz)`.
    pub fn momentum_point(&self, k: usize) -> f64 {
        self.grid.momentum_min() + k as f64 * self.grid.momentum_spacing()
    }

    pub fn position_density(&self) -> Vec<f64> {
        self.position.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn momentum_density(&self) -> Vec<f64> {
        self.momentum.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn position_norm(&self) -> f64 {
        self.position.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn momentum_norm(&self) -> f64 {
        self.momentum.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.momentum_spacing()
    }

    /// Momentum probability with `|p| >= 0.9 π/dz`, the outer tenth of the
    /// band. Zero before the momentum side is filled.
    pub fn outer_band_probability(&self) -> f64 {
        let n = self.momentum.len();
        let edge = n / 20;
        self.momentum[..edge]
            .iter()
            .chain(&self.momentum[n - edge..])
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            * self.grid.momentum_spacing()
    }

    pub fn position_view<'a>(&self, density: &'a [f64]) -> SampledDensity<'a> {
        SampledDensity::new(density, 0.0, self.grid.spacing())
    }

    pub fn momentum_view<'a>(&self, density: &'a [f64]) -> SampledDensity<'a> {
        SampledDensity::new(
            density,
            self.grid.momentum_min(),
            self.grid.momentum_spacing(),
        )
    }

    /// `∫ conj(ψ_self) ψ_other dz` on the shared grid.
    pub fn overlap(&self, other: &GridState) -> Complex64 {
        self.position
            .iter()
            .zip(&other.position)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * self.grid.spacing()
    }
}

/// Discrete approximation of `φ(p) = (2π)^{-1/2} ∫ ψ(z) e^{-ipz} dz`.
#[derive(Clone)]
pub struct MomentumTransform {
    fft: Arc<dyn Fft<f64>>,
}

impl MomentumTransform {
    pub fn new(num_points: usize) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(num_points);
        MomentumTransform { fft }
    }

    /// Fills the momentum side of `state` and checks for aliasing.
    pub fn apply(&self, state: &mut GridState) -> Result<()> {
        self.transform(state)?;
        let outer = state.outer_band_probability();
        if outer >= ALIASING_TOL {
            return Err(Error::Aliasing { outer });
        }
        Ok(())
    }

    /// Fills the momentum side of `state` without the aliasing check.
    pub fn transform(&self, state: &mut GridState) -> Result<()> {
        let n = state.grid.num_points();
        if self.fft.len() != n {
            return Err(Error::Domain(format!(
                "transform planned for {} points, state has {n}",
                self.fft.len()
            )));
        }
        let mut buffer = state.position.clone();
        self.fft.process(&mut buffer);
        // z_min = 0, so no extra phase; negative frequencies are rotated to
        // the front so momenta ascend from -π/dz.
        let scale = state.grid.spacing() / (2.0 * PI).sqrt();
        let half = n / 2;
        let mut momentum = Vec::with_capacity(n);
        momentum.extend(buffer[half..].iter().map(|a| a * scale));
        momentum.extend(buffer[..half].iter().map(|a| a * scale));
        state.momentum = momentum;
        Ok(())
    }
}

/// One-off momentum transform; prefer a shared [`MomentumTransform`] in loops.
pub fn to_momentum(state: &mut GridState) -> Result<()> {
    MomentumTransform::new(state.grid.num_points()).apply(state)
}

/// Tabulated eigenfunctions `φ_n(z_j)` of the contributing states, ready to
/// synthesize `Ψ(z_j, t) = Σ_n C_n e^{-i z_n t} φ_n(z_j)` at any time.
pub struct Propagator {
    grid: PositionGrid,
    rows: Vec<Row>,
    transform: MomentumTransform,
}

struct Row {
    coefficient: f64,
    energy: f64,
    start: usize,
    values: Vec<f64>,
}

impl Propagator {
    pub fn new(basis: &BouncerBasis, grid: PositionGrid) -> Result<Self> {
        grid.check_covers(basis.z0(), basis.sigma())?;
        let largest = basis
            .coefficients()
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        let table = basis.zero_table();
        let rows = (1..=basis.n_max())
            .filter(|&n| basis.coefficient(n).abs() > COEFF_CUTOFF * largest)
            .map(|n| {
                let zn = table.zero(n);
                let norm = table.normalization(n);
                let samples: Vec<f64> = (0..grid.num_points())
                    .map(|j| norm * airy::ai(grid.point(j) - zn))
                    .collect();
                let first = samples.iter().position(|v| v.abs() >= SAMPLE_CUTOFF);
                let last = samples.iter().rposition(|v| v.abs() >= SAMPLE_CUTOFF);
                let (start, end) = match (first, last) {
                    (Some(a), Some(b)) => (a, b + 1),
                    _ => (0, 0),
                };
                Row {
                    coefficient: basis.coefficient(n),
                    energy: zn,
                    start,
                    values: samples[start..end].to_vec(),
                }
            })
            .collect();
        Ok(Propagator {
            grid,
            rows,
            transform: MomentumTransform::new(grid.num_points()),
        })
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    /// Number of eigenstates kept after dropping negligible coefficients.
    pub fn active_states(&self) -> usize {
        self.rows.len()
    }

    /// Position-space wavefunction only.
    pub fn position_at(&self, t: f64) -> Result<GridState> {
        let n = self.grid.num_points();
        let mut re = vec![0.0; n];
        let mut im = vec![0.0; n];
        for row in &self.rows {
            let (s, c) = (row.energy * t).sin_cos();
            let (cr, ci) = (row.coefficient * c, -row.coefficient * s);
            let end = row.start + row.values.len();
            for ((r, i), v) in re[row.start..end]
                .iter_mut()
                .zip(&mut im[row.start..end])
                .zip(&row.values)
            {
                *r += cr * v;
                *i += ci * v;
            }
        }
        let position: Vec<Complex64> = re
            .into_iter()
            .zip(im)
            .map(|(r, i)| Complex64::new(r, i))
            .collect();
        let top = position[n - 1].norm();
        if top > BOUNDARY_TOL {
            return Err(Error::GridTooSmall { amplitude: top }.at_time(t));
        }
        GridState::from_position(t, self.grid, position)
    }

    /// `Ψ(·, t)` in position and momentum space.
    pub fn evolve_to(&self, t: f64) -> Result<GridState> {
        let mut state = self.position_at(t)?;
        self.transform.apply(&mut state).map_err(|e| e.at_time(t))?;
        Ok(state)
    }
}

/// Builds a propagator and evolves once. Scans should reuse a [`Propagator`].
pub fn evolve_to(basis: &BouncerBasis, grid: PositionGrid, t: f64) -> Result<GridState> {
    Propagator::new(basis, grid)?.evolve_to(t)
}

/// `A(t) = Σ_n |C_n|² e^{-i z_n t}`.
pub fn autocorrelation(basis: &BouncerBasis, t: f64) -> Complex64 {
    basis
        .coefficients()
        .iter()
        .zip(basis.energies())
        .map(|(c, e)| {
            let (s, co) = (e * t).sin_cos();
            Complex64::new(c * c * co, -c * c * s)
        })
        .sum()
}
