//! Run configuration: a single JSON document whose fields all default to
//! the `z0 = 100, σ = 1, p0 = 0` bouncer scenario.

use crate::basis::{auto_n_max, build_basis, estimate_time_scales, BouncerBasis, TimeScales};
use crate::dynamics::{PositionGrid, ALIASING_TOL};
use crate::error::{Error, Result};
use crate::measures::AlphaPair;
use crate::revival::DetectorSettings;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

/// A value that is either given explicitly or the literal string `"auto"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Auto<T> {
    Value(T),
    Keyword(AutoKeyword),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutoKeyword {
    #[serde(rename = "auto")]
    Auto,
}

impl<T> Default for Auto<T> {
    fn default() -> Self {
        Auto::Keyword(AutoKeyword::Auto)
    }
}

impl<T: Clone> Auto<T> {
    pub fn resolve(&self, auto: impl FnOnce() -> Result<T>) -> Result<T> {
        match self {
            Auto::Value(v) => Ok(v.clone()),
            Auto::Keyword(_) => auto(),
        }
    }
}

/// A Rényi index given as a number or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexSpec {
    Number(f64),
    Ratio(String),
}

impl IndexSpec {
    pub fn value(&self) -> Result<f64> {
        match self {
            IndexSpec::Number(x) => Ok(*x),
            IndexSpec::Ratio(s) => {
                let parse = |t: &str| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Config(format!("cannot parse alpha {s:?}")))
                };
                match s.split_once('/') {
                    Some((p, q)) => Ok(parse(p)? / parse(q)?),
                    None => parse(s),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub z_max: Auto<f64>,
    pub num_points: Auto<usize>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            z_max: Auto::default(),
            num_points: Auto::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub t_start: f64,
    pub t_end: Auto<f64>,
    pub num_samples: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            t_start: 0.0,
            t_end: Auto::default(),
            num_samples: 8192,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DetectorConfig {
    pub smoothing_window: Auto<usize>,
    pub prominence: f64,
    pub q_max: u32,
    pub matching_window: f64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            smoothing_window: Auto::default(),
            prominence: 0.02,
            q_max: 4,
            matching_window: 0.02,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    /// Times for the bound table; `auto` is `{0, T_rev/4, T_rev/2, T_rev}`.
    pub times: Auto<Vec<f64>>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            times: Auto::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SnapshotConfig {
    pub times: Vec<f64>,
}

impl Default for SnapshotConfig {
    fn default() -> Self {
        SnapshotConfig { times: vec![0.0] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            formats: vec![OutputFormat::Csv, OutputFormat::Json],
        }
    }
}

/// Physical and numerical parameters of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub z0: f64,
    pub sigma: f64,
    pub p0: f64,
    pub alphas: Vec<IndexSpec>,
    pub n_max: Auto<usize>,
    pub grid: GridConfig,
    pub scan: ScanConfig,
    pub detector: DetectorConfig,
    pub check: CheckConfig,
    pub snapshot: SnapshotConfig,
    pub output: OutputConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            z0: 100.0,
            sigma: 1.0,
            p0: 0.0,
            alphas: vec![
                IndexSpec::Ratio("2/3".into()),
                IndexSpec::Ratio("4/5".into()),
            ],
            n_max: Auto::default(),
            grid: GridConfig::default(),
            scan: ScanConfig::default(),
            detector: DetectorConfig::default(),
            check: CheckConfig::default(),
            snapshot: SnapshotConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn alpha_pairs(&self) -> Result<Vec<AlphaPair>> {
        self.alphas
            .iter()
            .map(|a| {
                let v = a.value()?;
                AlphaPair::new(v).map_err(|_| {
                    Error::Config(format!(
                        "alpha {v} outside (1/2, 1]; entropy powers need 1/2 < alpha <= 1"
                    ))
                })
            })
            .collect()
    }

    /// Checks every bound that does not need the basis.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.z0.is_finite() && self.z0 > 0.0) {
            return bad(format!("z0 must be a positive height, got {}", self.z0));
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return bad(format!("sigma must be positive, got {}", self.sigma));
        }
        if self.p0 != 0.0 {
            return bad(format!(
                "p0 = {} is not supported: the analytic coefficients assume a packet released at rest (p0 = 0)",
                self.p0
            ));
        }
        if self.alphas.is_empty() {
            return bad("alphas must list at least one index".into());
        }
        let pairs = self.alpha_pairs()?;
        for (i, a) in pairs.iter().enumerate() {
            if pairs[..i]
                .iter()
                .any(|b| (a.alpha() - b.alpha()).abs() < 1e-12)
            {
                return bad(format!("alpha {} listed twice", a.alpha()));
            }
        }
        if let Auto::Value(n) = self.n_max {
            if n < 3 {
                return bad(format!("n_max must be at least 3, got {n}"));
            }
        }
        if let Auto::Value(z) = self.grid.z_max {
            if !(z.is_finite() && z > 0.0) {
                return bad(format!("grid.z_max must be positive, got {z}"));
            }
        }
        if let Auto::Value(n) = self.grid.num_points {
            if n < 1024 || !n.is_power_of_two() {
                return bad(format!(
                    "grid.num_points must be a power of two >= 1024, got {n}"
                ));
            }
        }
        if self.scan.num_samples < 2 {
            return bad(format!(
                "scan.num_samples must be at least 2, got {}",
                self.scan.num_samples
            ));
        }
        if !self.scan.t_start.is_finite() {
            return bad("scan.t_start must be finite".into());
        }
        if let Auto::Value(t) = self.scan.t_end {
            if !(t.is_finite() && t > self.scan.t_start) {
                return bad(format!(
                    "scan.t_end = {t} must exceed t_start = {}",
                    self.scan.t_start
                ));
            }
        }
        if let Auto::Value(w) = self.detector.smoothing_window {
            if w == 0 || w % 2 == 0 {
                return bad(format!("detector.smoothing_window must be odd, got {w}"));
            }
        }
        if !(self.detector.prominence >= 0.0 && self.detector.prominence.is_finite()) {
            return bad(format!(
                "detector.prominence must be >= 0, got {}",
                self.detector.prominence
            ));
        }
        if self.detector.q_max < 2 {
            return bad(format!(
                "detector.q_max must be at least 2, got {}",
                self.detector.q_max
            ));
        }
        if !(self.detector.matching_window > 0.0 && self.detector.matching_window.is_finite()) {
            return bad(format!(
                "detector.matching_window must be positive, got {}",
                self.detector.matching_window
            ));
        }
        if let Auto::Value(times) = &self.check.times {
            if times.is_empty() || times.iter().any(|t| !t.is_finite()) {
                return bad("check.times must list finite times".into());
            }
        }
        if self.snapshot.times.iter().any(|t| !t.is_finite()) {
            return bad("snapshot.times must be finite".into());
        }
        Ok(())
    }

    /// Resolves every `auto` field and builds the basis.
    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let alphas = self.alpha_pairs()?;
        let n_max = self.n_max.resolve(|| auto_n_max(self.z0, self.sigma))?;
        let basis = build_basis(self.z0, self.sigma, n_max)?;
        let scales = estimate_time_scales(&basis)?;

        let z_max = self.grid.z_max.resolve(|| Ok(auto_z_max(&basis)))?;
        let num_points = self
            .grid
            .num_points
            .resolve(|| Ok(auto_num_points(&basis, z_max)))?;
        let grid =
            PositionGrid::new(z_max, num_points).map_err(|e| Error::Config(e.to_string()))?;
        grid.check_covers(self.z0, self.sigma)
            .map_err(|e| Error::Config(e.to_string()))?;

        let t_end = self.scan.t_end.resolve(|| Ok(1.05 * scales.t_rev))?;
        if !(t_end > self.scan.t_start) {
            return Err(Error::Config(format!(
                "scan.t_end = {t_end} must exceed t_start = {}",
                self.scan.t_start
            )));
        }
        let dt = (t_end - self.scan.t_start) / (self.scan.num_samples - 1) as f64;
        let auto_detector = DetectorSettings::for_sampling(scales.t_cl, dt);
        let detector = DetectorSettings {
            smoothing_window: self
                .detector
                .smoothing_window
                .resolve(|| Ok(auto_detector.smoothing_window))?,
            prominence: self.detector.prominence,
            q_max: self.detector.q_max,
            matching_window: self.detector.matching_window,
        };
        let check_times = self.check.times.resolve(|| {
            Ok(vec![
                0.0,
                0.25 * scales.t_rev,
                0.5 * scales.t_rev,
                scales.t_rev,
            ])
        })?;

        let resolved = Resolved {
            z0: self.z0,
            sigma: self.sigma,
            p0: self.p0,
            alphas: alphas.iter().map(|a| a.alpha()).collect(),
            betas: alphas.iter().map(|a| a.beta()).collect(),
            n_max,
            z_max,
            num_points,
            dz: grid.spacing(),
            t_start: self.scan.t_start,
            t_end,
            num_samples: self.scan.num_samples,
            dt,
            detector,
            check_times,
            snapshot_times: self.snapshot.times.clone(),
        };
        Ok(Prepared {
            config: self.clone(),
            resolved,
            alphas,
            basis,
            grid,
            scales,
        })
    }
}

/// Smallest power of two covering `max(2 z0, z0 + 12 max(σ, 1), 16)` and
/// the weighted support of every basis state, the height above `z_n` where
/// `|C_n φ_n|` falls below `1e-8`. The second condition matters for small
/// `z0`: overlaps only decay like `exp(-σ²(z_n - z0)/4)`, so states far
/// above the packet still carry weight.
pub fn auto_z_max(basis: &BouncerBasis) -> f64 {
    let (z0, sigma) = (basis.z0(), basis.sigma());
    let support = (1..=basis.n_max())
        .map(|n| {
            let weight = (basis.coefficient(n) * basis.zero_table().normalization(n)).abs();
            let mut d = 0.0;
            while weight * crate::airy::airy_ai(d).unwrap_or(0.0).abs() > 1e-8 {
                d += 0.25;
            }
            basis.energy(n) + d
        })
        .fold(0.0, f64::max);
    let needed = (2.0 * z0)
        .max(z0 + 12.0 * sigma.max(1.0))
        .max(16.0)
        .max(support);
    2f64.powi(needed.log2().ceil() as i32)
}

/// Smallest power-of-two point count (at least 1024) on `[0, z_max)` that
/// passes the momentum aliasing check at every time.
///
/// Two limits apply. The Nyquist momentum `π/dz` must be three times
/// `√z0 + 6/σ`, the impact momentum plus six momentum widths. The wall is
/// more demanding: `ψ(0, t) = 0` while the slope `s = ∂ψ/∂z(0, t)` is not,
/// and on the grid that kink gives `|φ(p)|² ≈ s² dz⁴ / (32π sin⁴(p dz/2))`.
/// Summed over the outer tenth of the band this is `WALL_TAIL · s² dz³`.
/// Every `φ_n'(0)` is `±1`, so `|s| <= Σ |C_n|` at all times.
pub fn auto_num_points(basis: &BouncerBasis, z_max: f64) -> usize {
    let nyquist_dz = PI / (3.0 * (basis.z0().sqrt() + 6.0 / basis.sigma()));
    let slope = basis.wall_slope_bound();
    let wall_dz = (ALIASING_TOL / (WALL_TAIL * slope * slope)).cbrt();
    let dz = nyquist_dz.min(wall_dz);
    ((z_max / dz).ceil() as usize).next_power_of_two().max(1024)
}

/// `∫ csc⁴x dx / (8π)` over `[0.45π, 0.5π]`.
const WALL_TAIL: f64 = 6.354_612e-3;

/// Parameters after `auto` resolution; echoed in the manifest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Resolved {
    pub z0: f64,
    pub sigma: f64,
    pub p0: f64,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub n_max: usize,
    pub z_max: f64,
    pub num_points: usize,
    pub dz: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub num_samples: usize,
    pub dt: f64,
    pub detector: DetectorSettings,
    pub check_times: Vec<f64>,
    pub snapshot_times: Vec<f64>,
}

/// Everything a subcommand needs: resolved parameters and the built basis.
pub struct Prepared {
    pub config: ScenarioConfig,
    pub resolved: Resolved,
    pub alphas: Vec<AlphaPair>,
    pub basis: BouncerBasis,
    pub grid: PositionGrid,
    pub scales: TimeScales,
}
