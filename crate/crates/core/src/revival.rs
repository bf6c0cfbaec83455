//! Time scans of the uncertainty diagnostics and detection of revivals as
//! local minima matched to rational fractions `p/q` of the revival time.

use crate::basis::{estimate_time_scales, BouncerBasis, TimeScales};
use crate::dynamics::{autocorrelation, PositionGrid, Propagator};
use crate::error::{Error, Result};
use crate::measures::{check_bounds, measure, AlphaPair, MeasureSample};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::fmt;

/// A fractional revival `t = (p/q) T_rev`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fraction {
    pub p: u32,
    pub q: u32,
    pub t: f64,
}

impl Fraction {
    pub fn ratio(&self) -> f64 {
        f64::from(self.p) / f64::from(self.q)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Coprime `p/q` with `1 <= p < q <= q_max`, plus `1/1`, in ascending time.
pub fn fractional_revival_times(t_rev: f64, q_max: u32) -> Vec<Fraction> {
    let mut out = vec![Fraction {
        p: 1,
        q: 1,
        t: t_rev,
    }];
    for q in 2..=q_max {
        for p in 1..q {
            if gcd(p, q) == 1 {
                out.push(Fraction {
                    p,
                    q,
                    t: t_rev * f64::from(p) / f64::from(q),
                });
            }
        }
    }
    // p/q are distinct rationals, so the order is strict
    out.sort_by(|a, b| (u64::from(a.p) * u64::from(b.q)).cmp(&(u64::from(b.p) * u64::from(a.q))));
    out
}

/// A detected minimum, located by parabolic interpolation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub t: f64,
    pub value: f64,
}

/// Centered moving average; windows are truncated at the ends.
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let n = values.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Local minima of a time-ordered series.
///
/// The series is smoothed with a centered moving average of
/// `smoothing_window` samples (odd). A strict local minimum of the smoothed
/// series (flat bottoms are taken at their midpoint) is kept when its
/// prominence, measured as for peaks of the negated series, is at least
/// `prominence` times the smoothed range. Location and value are refined by
/// a parabola through the three surrounding samples.
pub fn detect_minima(
    series: &[(f64, f64)],
    smoothing_window: usize,
    prominence: f64,
) -> Result<Vec<Minimum>> {
    if smoothing_window == 0 || smoothing_window % 2 == 0 {
        return Err(Error::Domain(format!(
            "smoothing window must be odd, got {smoothing_window}"
        )));
    }
    if smoothing_window >= series.len() {
        return Err(Error::Domain(format!(
            "smoothing window {smoothing_window} does not fit a series of {} samples",
            series.len()
        )));
    }
    if !(prominence >= 0.0) {
        return Err(Error::Domain(format!(
            "prominence must be nonnegative, got {prominence}"
        )));
    }
    let times: Vec<f64> = series.iter().map(|s| s.0).collect();
    let raw: Vec<f64> = series.iter().map(|s| s.1).collect();
    let s = moving_average(&raw, smoothing_window);
    let n = s.len();
    let (lo, hi) = s
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let range = hi - lo;
    if !(range > 0.0) {
        return Ok(Vec::new());
    }
    let threshold = prominence * range;

    let mut minima = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if s[i] < s[i - 1] {
            let mut j = i;
            while j + 1 < n && s[j + 1] == s[i] {
                j += 1;
            }
            if j + 1 < n && s[j + 1] > s[j] {
                let mid = (i + j) / 2;
                if minimum_prominence(&s, i, j) >= threshold {
                    minima.push(refine(&times, &s, mid));
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    Ok(minima)
}

/// Prominence of the flat bottom `s[first..=last]`.
fn minimum_prominence(s: &[f64], first: usize, last: usize) -> f64 {
    let v = s[first];
    let mut left_max = v;
    for k in (0..first).rev() {
        if s[k] < v {
            break;
        }
        left_max = left_max.max(s[k]);
    }
    let mut right_max = v;
    for &x in &s[last + 1..] {
        if x < v {
            break;
        }
        right_max = right_max.max(x);
    }
    left_max.min(right_max) - v
}

fn refine(times: &[f64], s: &[f64], i: usize) -> Minimum {
    let (a, b, c) = (s[i - 1], s[i], s[i + 1]);
    let curvature = a - 2.0 * b + c;
    if curvature <= 0.0 {
        return Minimum {
            t: times[i],
            value: b,
        };
    }
    let delta = (0.5 * (a - c) / curvature).clamp(-1.0, 1.0);
    let step = 0.5 * (times[i + 1] - times[i - 1]);
    Minimum {
        t: times[i] + delta * step,
        value: b - 0.25 * (a - c) * delta,
    }
}

/// A minimum with its matched fraction, if any.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnnotatedMinimum {
    pub t: f64,
    pub value: f64,
    pub fraction: Option<Fraction>,
}

/// Matches each minimum to the nearest fraction time within `window`;
/// equidistant candidates go to the smaller `q`.
pub fn match_fractions(
    minima: &[Minimum],
    fractions: &[Fraction],
    window: f64,
) -> Vec<AnnotatedMinimum> {
    minima
        .iter()
        .map(|m| {
            let mut best: Option<(f64, Fraction)> = None;
            for f in fractions {
                let d = (m.t - f.t).abs();
                if d > window {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bd, bf)) => {
                        let tie = (d - bd).abs() <= 1e-12 * window.max(1.0);
                        if tie {
                            f.q < bf.q
                        } else {
                            d < bd
                        }
                    }
                };
                if better {
                    best = Some((d, *f));
                }
            }
            AnnotatedMinimum {
                t: m.t,
                value: m.value,
                fraction: best.map(|(_, f)| f),
            }
        })
        .collect()
}

/// Knobs of the minima detector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DetectorSettings {
    /// Moving-average window in samples (odd).
    pub smoothing_window: usize,
    /// Minimum prominence as a fraction of the smoothed series range.
    pub prominence: f64,
    pub q_max: u32,
    /// Matching window as a fraction of `T_rev`.
    pub matching_window: f64,
}

impl DetectorSettings {
    /// Defaults: one classical period of samples, 2% prominence, `q <= 4`,
    /// window `0.02 T_rev`.
    pub fn for_sampling(t_cl: f64, dt: f64) -> Self {
        let samples = (t_cl / dt).round().max(1.0) as usize;
        DetectorSettings {
            smoothing_window: samples | 1,
            prominence: 0.02,
            q_max: 4,
            matching_window: 0.02,
        }
    }
}

/// Detected minima of one diagnostic series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagnosticMinima {
    pub diagnostic: String,
    pub minima: Vec<AnnotatedMinimum>,
}

/// One column of the timeline table; per-index columns carry the position
/// of their index in the configured list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    Time,
    ShannonRho,
    ShannonGamma,
    ShannonSum,
    RenyiRho(usize),
    RenyiGammaBeta(usize),
    RenyiSum(usize),
    PowerRho(usize),
    PowerGamma(usize),
    VarRho,
    VarGamma,
    PowerRhoVarGamma(usize),
    PowerGammaVarRho(usize),
    PowerRhoPowerGamma(usize),
    StddevProduct,
    AutocorrAbs,
}

impl Column {
    pub fn name(&self, alphas: &[AlphaPair]) -> String {
        let a = |i: usize| index_label(alphas[i].alpha());
        match *self {
            Column::Time => "t".into(),
            Column::ShannonRho => "S_rho".into(),
            Column::ShannonGamma => "S_gamma".into(),
            Column::ShannonSum => "shannon_sum".into(),
            Column::RenyiRho(i) => format!("R_rho_a{}", a(i)),
            Column::RenyiGammaBeta(i) => format!("R_gamma_b{}", index_label(alphas[i].beta())),
            Column::RenyiSum(i) => format!("renyi_sum_a{}", a(i)),
            Column::PowerRho(i) => format!("N_rho_a{}", a(i)),
            Column::PowerGamma(i) => format!("N_gamma_a{}", a(i)),
            Column::VarRho => "var_rho".into(),
            Column::VarGamma => "var_gamma".into(),
            Column::PowerRhoVarGamma(i) => format!("prod_Nrho_vargamma_a{}", a(i)),
            Column::PowerGammaVarRho(i) => format!("prod_Ngamma_varrho_a{}", a(i)),
            Column::PowerRhoPowerGamma(i) => format!("prod_Nrho_Ngamma_a{}", a(i)),
            Column::StddevProduct => "stddev_product".into(),
            Column::AutocorrAbs => "autocorr_abs".into(),
        }
    }

    pub fn value(&self, s: &MeasureSample) -> f64 {
        match *self {
            Column::Time => s.time,
            Column::ShannonRho => s.shannon_rho,
            Column::ShannonGamma => s.shannon_gamma,
            Column::ShannonSum => s.shannon_sum(),
            Column::RenyiRho(i) => s.per_alpha[i].renyi_rho,
            Column::RenyiGammaBeta(i) => s.per_alpha[i].renyi_gamma_beta,
            Column::RenyiSum(i) => s.per_alpha[i].renyi_sum,
            Column::PowerRho(i) => s.per_alpha[i].power_rho,
            Column::PowerGamma(i) => s.per_alpha[i].power_gamma,
            Column::VarRho => s.var_rho,
            Column::VarGamma => s.var_gamma,
            Column::PowerRhoVarGamma(i) => s.per_alpha[i].power_rho_times_var_gamma,
            Column::PowerGammaVarRho(i) => s.per_alpha[i].power_gamma_times_var_rho,
            Column::PowerRhoPowerGamma(i) => s.per_alpha[i].power_rho_times_power_gamma,
            Column::StddevProduct => s.stddev_product(),
            Column::AutocorrAbs => s.autocorr_abs,
        }
    }
}

/// Timeline table columns in output order.
pub fn timeline_columns(alphas: &[AlphaPair]) -> Vec<Column> {
    let k = alphas.len();
    let mut cols = vec![
        Column::Time,
        Column::ShannonRho,
        Column::ShannonGamma,
        Column::ShannonSum,
    ];
    for i in 0..k {
        cols.extend([
            Column::RenyiRho(i),
            Column::RenyiGammaBeta(i),
            Column::RenyiSum(i),
            Column::PowerRho(i),
            Column::PowerGamma(i),
        ]);
    }
    cols.extend([Column::VarRho, Column::VarGamma]);
    for i in 0..k {
        cols.extend([
            Column::PowerRhoVarGamma(i),
            Column::PowerGammaVarRho(i),
            Column::PowerRhoPowerGamma(i),
        ]);
    }
    cols.extend([Column::StddevProduct, Column::AutocorrAbs]);
    cols
}

/// Sampled diagnostics over a time window, plus detected minima.
#[derive(Clone, Debug)]
pub struct RevivalTimeline {
    pub samples: Vec<MeasureSample>,
    pub alphas: Vec<AlphaPair>,
    pub t_cl: f64,
    pub t_rev: f64,
    pub t_rev_fd: f64,
    pub minima: Vec<DiagnosticMinima>,
}

/// Formats an index the way column names carry it, e.g. `0.6667`.
pub fn index_label(x: f64) -> String {
    format!("{x:.4}")
}

impl RevivalTimeline {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.time).collect()
    }

    /// Names of the diagnostics searched for minima, in output order.
    pub fn diagnostic_names(&self) -> Vec<String> {
        let mut names = Vec::new();
        for pair in &self.alphas {
            let a = index_label(pair.alpha());
            names.push(format!("prod_Nrho_vargamma_a{a}"));
            names.push(format!("prod_Ngamma_varrho_a{a}"));
            names.push(format!("prod_Nrho_Ngamma_a{a}"));
            if !pair.is_shannon() {
                names.push(format!("renyi_sum_a{a}"));
            }
        }
        names.push("shannon_sum".into());
        names.push("stddev_product".into());
        names
    }

    /// `(t, value)` pairs of a named diagnostic (any timeline CSV column).
    pub fn series(&self, name: &str) -> Option<Vec<(f64, f64)>> {
        let column = timeline_columns(&self.alphas)
            .into_iter()
            .find(|c| c.name(&self.alphas) == name)?;
        Some(
            self.samples
                .iter()
                .map(|s| (s.time, column.value(s)))
                .collect(),
        )
    }

    /// Runs the detector on every diagnostic and labels the minima.
    ///
    /// The smoothing window is capped to the largest odd size that fits
    /// the series, so a short scan yields no minima rather than an error.
    pub fn analyze(&mut self, settings: &DetectorSettings) -> Result<()> {
        let fractions = fractional_revival_times(self.t_rev, settings.q_max);
        let window = settings.matching_window * self.t_rev;
        let n = self.samples.len();
        let largest_odd_below_n = if n % 2 == 0 {
            n.saturating_sub(1)
        } else {
            n.saturating_sub(2)
        };
        let smoothing = settings.smoothing_window.min(largest_odd_below_n.max(1));
        let mut all = Vec::new();
        for name in self.diagnostic_names() {
            let series = self.series(&name).expect("known diagnostic");
            let minima = if n < 3 {
                Vec::new()
            } else {
                detect_minima(&series, smoothing, settings.prominence)?
            };
            all.push(DiagnosticMinima {
                diagnostic: name,
                minima: match_fractions(&minima, &fractions, window),
            });
        }
        self.minima = all;
        Ok(())
    }

    pub fn minima_for(&self, diagnostic: &str) -> Option<&[AnnotatedMinimum]> {
        self.minima
            .iter()
            .find(|d| d.diagnostic == diagnostic)
            .map(|d| d.minima.as_slice())
    }
}

/// `num_samples` uniformly spaced times covering `[t_start, t_end]`.
pub fn sample_times(t_start: f64, t_end: f64, num_samples: usize) -> Vec<f64> {
    let dt = (t_end - t_start) / (num_samples - 1) as f64;
    (0..num_samples)
        .map(|i| {
            if i + 1 == num_samples {
                t_end
            } else {
                t_start + dt * i as f64
            }
        })
        .collect()
}

/// Evaluates one time sample and enforces every uncertainty bound.
pub fn sample_at(
    propagator: &Propagator,
    basis: &BouncerBasis,
    alphas: &[AlphaPair],
    t: f64,
) -> Result<MeasureSample> {
    let state = propagator.evolve_to(t)?;
    let sample =
        measure(&state, alphas, autocorrelation(basis, t).norm()).map_err(|e| e.at_time(t))?;
    check_bounds(&sample).ensure()?;
    Ok(sample)
}

/// Samples every diagnostic on a uniform time grid, in parallel.
pub fn scan_with(
    propagator: &Propagator,
    basis: &BouncerBasis,
    t_start: f64,
    t_end: f64,
    num_samples: usize,
    alphas: &[AlphaPair],
) -> Result<RevivalTimeline> {
    if !(t_start < t_end) {
        return Err(Error::Domain(format!(
            "scan needs t_start < t_end, got [{t_start}, {t_end}]"
        )));
    }
    if num_samples < 2 {
        return Err(Error::Domain(format!(
            "scan needs at least 2 samples, got {num_samples}"
        )));
    }
    let scales: TimeScales = estimate_time_scales(basis)?;
    let samples = sample_times(t_start, t_end, num_samples)
        .into_par_iter()
        .map(|t| sample_at(propagator, basis, alphas, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(RevivalTimeline {
        samples,
        alphas: alphas.to_vec(),
        t_cl: scales.t_cl,
        t_rev: scales.t_rev,
        t_rev_fd: scales.t_rev_fd,
        minima: Vec::new(),
    })
}

/// [`scan_with`] plus default detection (window = one classical period of
/// samples).
pub fn scan(
    basis: &BouncerBasis,
    grid: PositionGrid,
    t_start: f64,
    t_end: f64,
    num_samples: usize,
    alphas: &[AlphaPair],
) -> Result<RevivalTimeline> {
    let propagator = Propagator::new(basis, grid)?;
    let mut timeline = scan_with(&propagator, basis, t_start, t_end, num_samples, alphas)?;
    let dt = (t_end - t_start) / (num_samples - 1) as f64;
    let settings = DetectorSettings::for_sampling(timeline.t_cl, dt);
    timeline.analyze(&settings)?;
    Ok(timeline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn low_order_fractions() {
        let f = fractional_revival_times(1.0, 2);
        assert_eq!(f.len(), 2);
        assert_eq!((f[0].p, f[0].q), (1, 2));
        assert_eq!((f[1].p, f[1].q), (1, 1));
        let f: Vec<String> = fractional_revival_times(1.0, 4)
            .iter()
            .map(|f| f.to_string())
            .collect();
        assert_eq!(f, ["1/4", "1/3", "1/2", "2/3", "3/4", "1/1"]);
    }

    #[test]
    fn cosine_minima() {
        let series: Vec<(f64, f64)> = (0..=200)
            .map(|i| {
                let t = i as f64 / 100.0;
                (t, (2.0 * PI * t).cos())
            })
            .collect();
        let m = detect_minima(&series, 1, 0.02).unwrap();
        assert_eq!(m.len(), 2);
        assert!((m[0].t - 0.5).abs() < 0.01);
        assert!((m[1].t - 1.5).abs() < 0.01);
    }

    #[test]
    fn monotone_has_no_minima() {
        let series: Vec<(f64, f64)> = (0..100).map(|i| (i as f64, (i as f64).sqrt())).collect();
        assert!(detect_minima(&series, 5, 0.0).unwrap().is_empty());
    }

    #[test]
    fn window_errors() {
        let series: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 0.0)).collect();
        assert!(detect_minima(&series, 4, 0.02).is_err());
        assert!(detect_minima(&series, 11, 0.02).is_err());
        assert!(detect_minima(&series, 0, 0.02).is_err());
    }

    #[test]
    fn matching_rules() {
        let fr = fractional_revival_times(1.0, 4);
        let m = |t| Minimum { t, value: 0.0 };
        let out = match_fractions(&[m(0.501), m(0.30)], &fr, 0.02);
        assert_eq!(out[0].fraction.map(|f| (f.p, f.q)), Some((1, 2)));
        assert_eq!(out[1].fraction, None);
        let mid = (1.0 / 3.0 + 0.25) / 2.0;
        let out = match_fractions(&[m(mid)], &fr, 0.05);
        assert_eq!(out[0].fraction.map(|f| f.q), Some(3));
    }

    #[test]
    fn moving_average_edges() {
        let s = moving_average(&[1.0, 2.0, 3.0, 4.0, 5.0], 3);
        assert_eq!(s, vec![1.5, 2.0, 3.0, 4.0, 4.5]);
    }

    #[test]
    fn default_detector_window_is_odd() {
        let d = DetectorSettings::for_sampling(20.0, 13369.0 / 8191.0);
        assert_eq!(d.smoothing_window % 2, 1);
        assert!((11..=13).contains(&d.smoothing_window));
    }
}
