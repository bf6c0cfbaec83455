//! Differential Rényi and Shannon entropies, Rényi entropy powers, variances
//! and the uncertainty relations that tie position and momentum densities
//! together (one dimension, `ħ = 1`).

use crate::dynamics::GridState;
use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::{E, PI};

/// Allowed deviation of `∫ρ` from one.
pub const NORMALIZATION_TOL: f64 = 1e-4;
/// Densities below this are treated as exact zeros.
pub const DENSITY_FLOOR: f64 = 1e-30;
/// Slack below which a bound counts as violated.
pub const BOUND_TOL: f64 = 1e-6;

const UNIT_INDEX_TOL: f64 = 1e-12;

/// Samples of a density on a uniform grid `x_j = origin + j · spacing`.
#[derive(Clone, Copy, Debug)]
pub struct SampledDensity<'a> {
    values: &'a [f64],
    origin: f64,
    spacing: f64,
}

impl<'a> SampledDensity<'a> {
    pub fn new(values: &'a [f64], origin: f64, spacing: f64) -> Self {
        SampledDensity {
            values,
            origin,
            spacing,
        }
    }

    pub fn values(&self) -> &'a [f64] {
        self.values
    }

    pub fn point(&self, j: usize) -> f64 {
        self.origin + j as f64 * self.spacing
    }

    /// Composite trapezoid rule of `f(ρ_j, x_j)`.
    fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let n = self.values.len();
        if n == 0 {
            return 0.0;
        }
        let mut sum = 0.0;
        for (j, &v) in self.values.iter().enumerate() {
            let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
            sum += w * f(v, self.point(j));
        }
        sum * self.spacing
    }

    fn validate(&self) -> Result<()> {
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::Domain(format!(
                "grid spacing must be positive, got {}",
                self.spacing
            )));
        }
        if let Some(v) = self.values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!(
                "density sample {v} is not a finite nonnegative value"
            )));
        }
        let mass = self.integrate(|v, _| v);
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Domain(format!(
                "density integrates to {mass}, not 1"
            )));
        }
        Ok(())
    }
}

/// Shannon entropy and `∫ ρ^a` for several indices from one sweep.
struct EntropySums {
    shannon: f64,
    powers: Vec<f64>,
}

impl SampledDensity<'_> {
    /// Trapezoid sums of `-ρ ln ρ` and `ρ^a`, skipping samples below the
    /// density floor. `ln ρ` is shared across indices; integer indices use
    /// repeated multiplication.
    fn entropy_sums(&self, indices: &[f64]) -> EntropySums {
        let n = self.values.len();
        let integer: Vec<Option<i32>> = indices
            .iter()
            .map(|&a| (a.fract() == 0.0 && a.abs() <= 16.0).then_some(a as i32))
            .collect();
        let mut shannon = 0.0;
        let mut powers = vec![0.0; indices.len()];
        for (j, &v) in self.values.iter().enumerate() {
            if v < DENSITY_FLOOR {
                continue;
            }
            let w = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
            let ln = v.ln();
            shannon -= w * v * ln;
            for ((sum, &a), m) in powers.iter_mut().zip(indices).zip(&integer) {
                let p = match *m {
                    Some(m) => v.powi(m),
                    None => (a * ln).exp(),
                };
                *sum += w * p;
            }
        }
        EntropySums {
            shannon: shannon * self.spacing,
            powers: powers.into_iter().map(|p| p * self.spacing).collect(),
        }
    }
}

fn is_unit_index(alpha: f64) -> bool {
    (alpha - 1.0).abs() < UNIT_INDEX_TOL
}

/// `(1/(1-α)) ln ∫ ρ^α dx` in nats. Index one is rejected; use
/// [`shannon_entropy`].
pub fn renyi_entropy(density: &SampledDensity, alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Domain(format!(
            "Renyi index must be positive, got {alpha}"
        )));
    }
    if is_unit_index(alpha) {
        return Err(Error::Domain(
            "Renyi index 1 is the Shannon entropy; call shannon_entropy".into(),
        ));
    }
    density.validate()?;
    let integral = density.entropy_sums(&[alpha]).powers[0];
    Ok(integral.ln() / (1.0 - alpha))
}

/// `-∫ ρ ln ρ dx` in nats, with `0 ln 0 = 0`.
pub fn shannon_entropy(density: &SampledDensity) -> Result<f64> {
    density.validate()?;
    Ok(density.entropy_sums(&[]).shannon)
}

/// `(α/(2α-1))^{(2α-1)/(α-1)}`, with its limit `1/e` at `α = 1`.
pub fn entropy_power_prefactor(alpha: f64) -> f64 {
    if is_unit_index(alpha) {
        1.0 / E
    } else {
        (alpha / (2.0 * alpha - 1.0)).powf((2.0 * alpha - 1.0) / (alpha - 1.0))
    }
}

/// Rényi entropy power `N^{(α)} = prefactor(α) e^{2R}/(2π)` for
/// `α ∈ (1/2, 1]`. At `α = 1` this is the Shannon power `e^{2S}/(2πe)`.
pub fn entropy_power(renyi: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha <= 1.0 + UNIT_INDEX_TOL) {
        return Err(Error::Domain(format!(
            "entropy power index must lie in (1/2, 1], got {alpha}"
        )));
    }
    Ok(power_unchecked(renyi, alpha))
}

/// Entropy power at a conjugate index `β >= 1`, same formula as
/// [`entropy_power`]. Needed for `N^{(α)}_ρ N^{(β)}_γ >= 1/4`.
pub fn conjugate_entropy_power(renyi: f64, beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta >= 1.0 - UNIT_INDEX_TOL) {
        return Err(Error::Domain(format!(
            "conjugate entropy power index must be >= 1, got {beta}"
        )));
    }
    Ok(power_unchecked(renyi, beta))
}

fn power_unchecked(renyi: f64, index: f64) -> f64 {
    entropy_power_prefactor(index) * (2.0 * renyi).exp() / (2.0 * PI)
}

/// `⟨x²⟩ - ⟨x⟩²`.
pub fn variance(density: &SampledDensity) -> Result<f64> {
    density.validate()?;
    variance_unchecked(density)
}

fn variance_unchecked(density: &SampledDensity) -> Result<f64> {
    let mass = density.integrate(|v, _| v);
    let mean = density.integrate(|v, x| v * x) / mass;
    let var = density.integrate(|v, x| v * (x - mean) * (x - mean)) / mass;
    if var < -1e-12 {
        return Err(Error::Domain(format!("negative variance {var}")));
    }
    Ok(var.max(0.0))
}

/// `1/x + 1/y = 2` solved for `y`.
pub fn conjugate_index(x: f64) -> f64 {
    if is_unit_index(x) {
        1.0
    } else {
        x / (2.0 * x - 1.0)
    }
}

/// Index `α ∈ (1/2, 1]` with its conjugate `β = α/(2α - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaPair {
    alpha: f64,
    beta: f64,
}

impl AlphaPair {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.5 && alpha <= 1.0 + UNIT_INDEX_TOL) {
            return Err(Error::Domain(format!(
                "alpha must lie in (1/2, 1], got {alpha}"
            )));
        }
        let alpha = if is_unit_index(alpha) { 1.0 } else { alpha };
        Ok(AlphaPair {
            alpha,
            beta: conjugate_index(alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn is_shannon(&self) -> bool {
        self.alpha == 1.0
    }

    /// Right-hand side of `R^{(α)}_ρ + R^{(β)}_γ >= ...`; `1 + ln π` at α = 1.
    pub fn renyi_sum_bound(&self) -> f64 {
        if self.is_shannon() {
            return shannon_sum_bound();
        }
        let (a, b) = (self.alpha, self.beta);
        -(a / PI).ln() / (2.0 * (1.0 - a)) - (b / PI).ln() / (2.0 * (1.0 - b))
    }
}

pub fn shannon_sum_bound() -> f64 {
    1.0 + PI.ln()
}

/// Per-index entropies and products at one time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaMeasures {
    pub pair: AlphaPair,
    /// `R^{(α)}_ρ`
    pub renyi_rho: f64,
    /// `R^{(α)}_γ`
    pub renyi_gamma: f64,
    /// `R^{(β)}_γ`
    pub renyi_gamma_beta: f64,
    pub power_rho: f64,
    pub power_gamma: f64,
    /// `N^{(β)}_γ`
    pub power_gamma_beta: f64,
    pub renyi_sum: f64,
    pub power_rho_times_var_gamma: f64,
    pub power_gamma_times_var_rho: f64,
    pub power_rho_times_power_gamma: f64,
    /// `N^{(α)}_ρ N^{(β)}_γ`
    pub conjugate_power_product: f64,
}

/// All scalar diagnostics at one time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureSample {
    pub time: f64,
    pub shannon_rho: f64,
    pub shannon_gamma: f64,
    pub var_rho: f64,
    pub var_gamma: f64,
    pub autocorr_abs: f64,
    pub norm_rho: f64,
    pub norm_gamma: f64,
    pub per_alpha: Vec<AlphaMeasures>,
}

impl MeasureSample {
    pub fn shannon_sum(&self) -> f64 {
        self.shannon_rho + self.shannon_gamma
    }

    pub fn stddev_product(&self) -> f64 {
        (self.var_rho * self.var_gamma).sqrt()
    }

    pub fn for_alpha(&self, alpha: f64) -> Option<&AlphaMeasures> {
        self.per_alpha
            .iter()
            .find(|m| (m.pair.alpha - alpha).abs() < 1e-12)
    }
}

/// Evaluates every diagnostic of `state`; the momentum side must be filled.
pub fn measure(
    state: &GridState,
    alphas: &[AlphaPair],
    autocorr_abs: f64,
) -> Result<MeasureSample> {
    if !state.has_momentum() {
        return Err(Error::Domain("momentum representation not computed".into()));
    }
    let rho_values = state.position_density();
    let gamma_values = state.momentum_density();
    let rho = state.position_view(&rho_values);
    let gamma = state.momentum_view(&gamma_values);

    rho.validate()?;
    gamma.validate()?;
    let var_rho = variance_unchecked(&rho)?;
    let var_gamma = variance_unchecked(&gamma)?;
    if !(var_rho > 0.0 && var_gamma > 0.0) {
        return Err(Error::Domain(format!(
            "degenerate variances: var_rho = {var_rho}, var_gamma = {var_gamma}"
        )));
    }

    let renyi = alphas.iter().filter(|p| !p.is_shannon());
    let rho_indices: Vec<f64> = renyi.clone().map(|p| p.alpha).collect();
    let gamma_indices: Vec<f64> = renyi.flat_map(|p| [p.alpha, p.beta]).collect();
    let rho_sums = rho.entropy_sums(&rho_indices);
    let gamma_sums = gamma.entropy_sums(&gamma_indices);
    let (shannon_rho, shannon_gamma) = (rho_sums.shannon, gamma_sums.shannon);
    let renyi_from = |integral: f64, index: f64| integral.ln() / (1.0 - index);

    let mut k = 0;
    let per_alpha = alphas
        .iter()
        .map(|&pair| {
            let (renyi_rho, renyi_gamma, renyi_gamma_beta) = if pair.is_shannon() {
                (shannon_rho, shannon_gamma, shannon_gamma)
            } else {
                let r = (
                    renyi_from(rho_sums.powers[k], pair.alpha),
                    renyi_from(gamma_sums.powers[2 * k], pair.alpha),
                    renyi_from(gamma_sums.powers[2 * k + 1], pair.beta),
                );
                k += 1;
                r
            };
            let power_rho = entropy_power(renyi_rho, pair.alpha)?;
            let power_gamma = entropy_power(renyi_gamma, pair.alpha)?;
            let power_gamma_beta = conjugate_entropy_power(renyi_gamma_beta, pair.beta)?;
            Ok(AlphaMeasures {
                pair,
                renyi_rho,
                renyi_gamma,
                renyi_gamma_beta,
                power_rho,
                power_gamma,
                power_gamma_beta,
                renyi_sum: renyi_rho + renyi_gamma_beta,
                power_rho_times_var_gamma: power_rho * var_gamma,
                power_gamma_times_var_rho: power_gamma * var_rho,
                power_rho_times_power_gamma: power_rho * power_gamma,
                conjugate_power_product: power_rho * power_gamma_beta,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MeasureSample {
        time: state.time,
        shannon_rho,
        shannon_gamma,
        var_rho,
        var_gamma,
        autocorr_abs,
        norm_rho: state.position_norm(),
        norm_gamma: state.momentum_norm(),
        per_alpha,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `R^{(α)}_ρ + R^{(β)}_γ >= -ln(α/π)/(2(1-α)) - ln(β/π)/(2(1-β))`
    RenyiSum,
    /// `S_ρ + S_γ >= 1 + ln π`
    ShannonSum,
    /// `N^{(α)}_ρ σ²_γ >= 1/4`
    PowerRhoVarGamma,
    /// `N^{(α)}_γ σ²_ρ >= 1/4`
    PowerGammaVarRho,
    /// `N^{(α)}_ρ N^{(α)}_γ >= 1/4`
    PowerRhoPowerGamma,
    /// `N^{(α)}_ρ N^{(β)}_γ >= 1/4`
    ConjugatePowers,
    /// `σ_ρ σ_γ >= 1/4` as printed alongside the entropic relations
    StddevQuarter,
    /// `σ_ρ σ_γ >= 1/2` (Heisenberg)
    StddevHalf,
}

impl Relation {
    pub fn label(&self) -> &'static str {
        match self {
            Relation::RenyiSum => "R_rho^a + R_gamma^b",
            Relation::ShannonSum => "S_rho + S_gamma",
            Relation::PowerRhoVarGamma => "N_rho^a var_gamma",
            Relation::PowerGammaVarRho => "N_gamma^a var_rho",
            Relation::PowerRhoPowerGamma => "N_rho^a N_gamma^a",
            Relation::ConjugatePowers => "N_rho^a N_gamma^b",
            Relation::StddevQuarter => "sigma_rho sigma_gamma (1/4)",
            Relation::StddevHalf => "sigma_rho sigma_gamma (1/2)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub relation: Relation,
    pub alpha: Option<f64>,
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub time: f64,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn min_slack(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.slack)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| r.slack < -BOUND_TOL)
    }

    pub fn row(&self, relation: Relation, alpha: Option<f64>) -> Option<&BoundRow> {
        self.rows.iter().find(|r| {
            r.relation == relation
                && match (r.alpha, alpha) {
                    (Some(a), Some(b)) => (a - b).abs() < 1e-12,
                    (None, None) => true,
                    _ => false,
                }
        })
    }

    /// Fails on the first relation whose slack is below `-1e-6`.
    pub fn ensure(&self) -> Result<()> {
        match self.violations().next() {
            None => Ok(()),
            Some(r) => Err(Error::BoundViolation {
                relation: match r.alpha {
                    Some(a) => format!("{} (alpha = {a})", r.relation.label()),
                    None => r.relation.label().to_string(),
                },
                value: r.value,
                bound: r.bound,
                slack: r.slack,
            }
            .at_time(self.time)),
        }
    }
}

/// Evaluates every uncertainty relation for `sample`.
pub fn check_bounds(sample: &MeasureSample) -> BoundReport {
    let mut rows = Vec::new();
    let mut push = |relation, alpha, value: f64, bound: f64| {
        rows.push(BoundRow {
            relation,
            alpha,
            value,
            bound,
            slack: value - bound,
        })
    };
    push(
        Relation::ShannonSum,
        None,
        sample.shannon_sum(),
        shannon_sum_bound(),
    );
    for m in &sample.per_alpha {
        let a = Some(m.pair.alpha);
        if !m.pair.is_shannon() {
            push(Relation::RenyiSum, a, m.renyi_sum, m.pair.renyi_sum_bound());
        }
        push(
            Relation::PowerRhoVarGamma,
            a,
            m.power_rho_times_var_gamma,
            0.25,
        );
        push(
            Relation::PowerGammaVarRho,
            a,
            m.power_gamma_times_var_rho,
            0.25,
        );
        push(
            Relation::PowerRhoPowerGamma,
            a,
            m.power_rho_times_power_gamma,
            0.25,
        );
        push(
            Relation::ConjugatePowers,
            a,
            m.conjugate_power_product,
            0.25,
        );
    }
    let sd = sample.stddev_product();
    push(Relation::StddevQuarter, None, sd, 0.25);
    push(Relation::StddevHalf, None, sd, 0.5);
    BoundReport {
        time: sample.time,
        rows,
    }
}
