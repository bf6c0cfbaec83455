//! Airy function Ai and its derivative on the real line, and the negative
//! zeros of Ai.
//!
//! Evaluation is split into three regions:
//!
//! * `-10 <= x <= 9`: Maclaurin series summed in double-double arithmetic.
//!   The series cancels badly away from the origin (by about `exp(2ζ)` for
//!   positive `x`), the extra 53 bits absorb that loss.
//! * `x < -10`: oscillatory asymptotic expansion, with the phase
//!   `ζ + π/4` reduced modulo 2π in double-double.
//! * `x > 9`: exponentially decaying asymptotic expansion.
//!
//! Here `ζ = (2/3)|x|^{3/2}`. Both asymptotic series have their smallest
//! term near `exp(-2ζ)`, which is below `1e-16` relative at the crossovers.

mod dd;

use crate::error::{Error, Result};
use dd::Dd;
use std::f64::consts::PI;

const SERIES_MIN: f64 = -10.0;
const SERIES_MAX: f64 = 9.0;

// Ai(0) and -Ai'(0) as double-double.
const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);

const TWO_PI: Dd = Dd::new(std::f64::consts::TAU, 2.4492935982947064e-16);
const QUARTER_PI: Dd = Dd::new(std::f64::consts::FRAC_PI_4, 3.061616997868383e-17);

/// Ai(x) for finite `x`.
pub fn airy_ai(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(ai(x))
}

/// Ai'(x) for finite `x`.
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(ai_prime(x))
}

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Airy argument must be finite, got {x}"
        )))
    }
}

pub(crate) fn ai(x: f64) -> f64 {
    let (scaled, zeta) = ai_scaled(x);
    if zeta == 0.0 {
        scaled
    } else {
        scaled * (-zeta).exp()
    }
}

pub(crate) fn ai_prime(x: f64) -> f64 {
    if x < SERIES_MIN {
        oscillatory(-x).1
    } else if x <= SERIES_MAX {
        maclaurin(x).1
    } else {
        let (_, d, zeta) = decaying(x);
        d * (-zeta).exp()
    }
}

/// Returns `(s, ζ)` with `Ai(x) = s · exp(-ζ)`. `ζ` is zero outside the
/// decaying region, so callers can work in log space where Ai underflows.
pub(crate) fn ai_scaled(x: f64) -> (f64, f64) {
    if x < SERIES_MIN {
        (oscillatory(-x).0, 0.0)
    } else if x <= SERIES_MAX {
        (maclaurin(x).0, 0.0)
    } else {
        let (a, _, zeta) = decaying(x);
        (a, zeta)
    }
}

/// (Ai, Ai') from the Maclaurin series `Ai = c1 f - c2 g`.
fn maclaurin(x: f64) -> (f64, f64) {
    let xd = Dd::from_f64(x);
    let x3 = xd * xd * xd;
    let tiny = 1e-34;

    // f = sum 3^k (1/3)_k x^{3k} / (3k)!
    let mut f = Dd::from_f64(1.0);
    let mut term = Dd::from_f64(1.0);
    // f' = sum_{k>=1} 3k c_k x^{3k-1}, first term x^2/2
    let mut fp = Dd::from_f64(0.0);
    let mut dterm = (xd * xd).div_f64(2.0);
    // g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
    let mut g = xd;
    let mut gterm = xd;
    // g' = sum (3k+1) e_k x^{3k}, first term 1
    let mut gp = Dd::from_f64(1.0);
    let mut hterm = Dd::from_f64(1.0);

    let mut k = 0u32;
    loop {
        let kf = f64::from(k);
        fp = fp + dterm;
        term = (term * x3).div_f64((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        f = f + term;
        gterm = (gterm * x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        g = g + gterm;
        hterm = (hterm * x3).div_f64((3.0 * kf + 1.0) * (3.0 * kf + 3.0));
        gp = gp + hterm;
        dterm = (dterm * x3).div_f64((3.0 * kf + 3.0) * (3.0 * kf + 5.0));
        k += 1;
        let scale = f.abs().hi.max(g.abs().hi).max(1.0);
        if k > 4
            && term.abs().hi < tiny * scale
            && gterm.abs().hi < tiny * scale
            && hterm.abs().hi < tiny * scale
            && dterm.abs().hi < tiny * scale
        {
            break;
        }
        if k > 200 {
            break;
        }
    }
    let value = AI0 * f - MINUS_AIP0 * g;
    let deriv = AI0 * fp - MINUS_AIP0 * gp;
    (value.to_f64(), deriv.to_f64())
}

/// Coefficients u_k of the Airy asymptotic expansions, with
/// `v_k = -(6k+1)/(6k-1) u_k`.
fn next_u(u_prev: f64, k: u32) -> f64 {
    let k = f64::from(k);
    u_prev * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k)
}

fn v_from_u(u: f64, k: u32) -> f64 {
    let k = f64::from(k);
    -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u
}

/// Sums `sum_k (-1)^k c_k / ζ^k` (or over even/odd k) until the terms stop
/// shrinking or drop below double precision.
struct AsymptoticSums {
    // index 0: u even, 1: u odd, 2: v even, 3: v odd, 4: u all, 5: v all
    sums: [f64; 6],
}

fn asymptotic_sums(zeta: f64) -> AsymptoticSums {
    let mut sums = [1.0, 0.0, 1.0, 0.0, 1.0, 1.0];
    let mut u = 1.0;
    let mut prev_mag = f64::INFINITY;
    let mut inv_pow = 1.0;
    for k in 1..200u32 {
        u = next_u(u, k);
        let v = v_from_u(u, k);
        inv_pow /= zeta;
        let tu = u * inv_pow;
        let tv = v * inv_pow;
        let mag = tu.abs().max(tv.abs());
        if mag > prev_mag {
            break;
        }
        prev_mag = mag;
        // sign pattern for the split sums: (-1)^{k/2} on u_{2j}, (-1)^j on u_{2j+1}
        let half = k / 2;
        let split_sign = if half % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            sums[0] += split_sign * tu;
            sums[2] += split_sign * tv;
        } else {
            sums[1] += split_sign * tu;
            sums[3] += split_sign * tv;
        }
        let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
        sums[4] += alt * tu;
        sums[5] += alt * tv;
        if mag < 1e-18 {
            break;
        }
    }
    AsymptoticSums { sums }
}

/// (Ai(-y), Ai'(-y)) for large positive `y`.
fn oscillatory(y: f64) -> (f64, f64) {
    let yd = Dd::from_f64(y);
    let zeta_dd = (yd * yd.sqrt()).mul_f64(2.0).div_f64(3.0);
    let zeta = zeta_dd.to_f64();
    let theta = zeta_dd + QUARTER_PI;
    let turns = (theta.hi / TWO_PI.hi).round();
    let reduced = theta - TWO_PI.mul_f64(turns);
    let (s0, c0) = reduced.hi.sin_cos();
    let sin_t = s0 + c0 * reduced.lo;
    let cos_t = c0 - s0 * reduced.lo;

    let s = asymptotic_sums(zeta).sums;
    let (p, q, r, t) = (s[0], s[1], s[2], s[3]);
    let y4 = y.sqrt().sqrt();
    let sqrt_pi = PI.sqrt();
    let value = (sin_t * p - cos_t * q) / (sqrt_pi * y4);
    let deriv = -(y4 / sqrt_pi) * (cos_t * r + sin_t * t);
    (value, deriv)
}

/// (e^ζ Ai(x), e^ζ Ai'(x), ζ) for large positive `x`.
fn decaying(x: f64) -> (f64, f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let s = asymptotic_sums(zeta).sums;
    let x4 = x.sqrt().sqrt();
    let norm = 2.0 * PI.sqrt();
    (s[4] / (norm * x4), -x4 * s[5] / norm, zeta)
}

/// The first `len()` zeros `-z_n` of Ai, stored as positive `z_n`, along with
/// `|Ai'(-z_n)|`.
#[derive(Clone, Debug, PartialEq)]
pub struct AiryZeroTable {
    zeros: Vec<f64>,
    derivative_magnitudes: Vec<f64>,
}

impl AiryZeroTable {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn derivative_magnitudes(&self) -> &[f64] {
        &self.derivative_magnitudes
    }

    /// `z_n` for 1-based `n`.
    pub fn zero(&self, n: usize) -> f64 {
        self.zeros[n - 1]
    }

    /// `|Ai'(-z_n)|` for 1-based `n`.
    pub fn derivative_magnitude(&self, n: usize) -> f64 {
        self.derivative_magnitudes[n - 1]
    }

    /// Normalization of `Ai(z - z_n)` on `[0, ∞)`, i.e. `1 / |Ai'(-z_n)|`.
    pub fn normalization(&self, n: usize) -> f64 {
        1.0 / self.derivative_magnitudes[n - 1]
    }
}

/// Leading asymptotic location of the n-th zero, `[3π(n - 1/4)/2]^{2/3}`.
pub fn zero_estimate(n: usize) -> f64 {
    (1.5 * PI * (n as f64 - 0.25)).powf(2.0 / 3.0)
}

fn refined_estimate(n: usize) -> f64 {
    let t = 1.5 * PI * (n as f64 - 0.25);
    let t2 = t * t;
    t.powf(2.0 / 3.0) * (1.0 + 5.0 / 48.0 / t2 - 5.0 / 36.0 / (t2 * t2))
}

/// Locates the first `count` zeros of Ai on the negative axis.
///
/// Each zero is bracketed around its asymptotic estimate, bisected to
/// an interval of width `1e-14` (relative for `z > 1`), and polished with a
/// single Newton step.
pub fn airy_zeros(count: usize) -> Result<AiryZeroTable> {
    if count == 0 {
        return Err(Error::Domain("zero count must be at least 1".into()));
    }
    let mut zeros = Vec::with_capacity(count);
    let mut derivs = Vec::with_capacity(count);
    for n in 1..=count {
        let z = refine_zero(n)?;
        if let Some(&prev) = zeros.last() {
            if z <= prev {
                return Err(Error::Bracketing {
                    index: n,
                    lo: prev,
                    hi: z,
                });
            }
        }
        zeros.push(z);
        derivs.push(ai_prime(-z).abs());
    }
    Ok(AiryZeroTable {
        zeros,
        derivative_magnitudes: derivs,
    })
}

fn refine_zero(n: usize) -> Result<f64> {
    let est = refined_estimate(n);
    let half_width = 0.3 * PI / est.sqrt();
    let (mut lo, mut hi) = (est - half_width, est + half_width);
    let f = |z: f64| ai(-z);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Bracketing { index: n, lo, hi });
    }
    while hi - lo > 1e-14 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    // d/dz Ai(-z) = -Ai'(-z)
    let polished = z + f(z) / ai_prime(-z);
    let z = if (polished - z).abs() <= (hi - lo) && f(polished).abs() <= f(z).abs() {
        polished
    } else {
        z
    };
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    // 40-digit reference values (mpmath).
    const AI_REF: &[(f64, f64, f64)] = &[
        (0.0, 0.3550280538878172, -0.2588194037928068),
        (1.0, 0.1352924163128814, -0.1591474412967932),
    ];

    #[test]
    fn origin_values() {
        for &(x, a, ap) in AI_REF {
            assert!((airy_ai(x).unwrap() - a).abs() < 1e-15);
            assert!((airy_ai_prime(x).unwrap() - ap).abs() < 1e-15);
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert!(airy_ai(f64::NAN).is_err());
        assert!(airy_ai_prime(f64::INFINITY).is_err());
        assert!(airy_ai(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn branches_agree_in_overlap() {
        for i in 0..=60 {
            let x = -12.0 + 4.0 * f64::from(i) / 60.0;
            let (a_s, d_s) = maclaurin(x);
            let (a_o, d_o) = oscillatory(-x);
            assert!((a_s - a_o).abs() < 1e-12, "Ai at {x}: {a_s} vs {a_o}");
            assert!((d_s - d_o).abs() < 1e-12, "Ai' at {x}: {d_s} vs {d_o}");
        }
        for i in 0..=40 {
            let x = 8.0 + 2.0 * f64::from(i) / 40.0;
            let (a_s, d_s) = maclaurin(x);
            let (a_e, d_e, z) = decaying(x);
            let (a_e, d_e) = (a_e * (-z).exp(), d_e * (-z).exp());
            assert!(
                ((a_s - a_e) / a_e).abs() < 1e-12,
                "Ai at {x}: {a_s} vs {a_e}"
            );
            assert!(
                ((d_s - d_e) / d_e).abs() < 1e-12,
                "Ai' at {x}: {d_s} vs {d_e}"
            );
        }
    }

    #[test]
    fn decays_for_large_positive_arguments() {
        let mut prev = airy_ai(20.0).unwrap();
        for x in [25.0, 30.0, 40.0, 60.0] {
            let v = airy_ai(x).unwrap();
            assert!(v >= 0.0 && v < prev);
            prev = v;
        }
        let v30 = airy_ai(30.0).unwrap();
        assert!(v30 > 0.0 && v30 < 1e-30);
        assert_eq!(airy_ai(1e6).unwrap(), 0.0);
    }

    #[test]
    fn zero_count_must_be_positive() {
        assert!(matches!(airy_zeros(0), Err(Error::Domain(_))));
    }

    #[test]
    fn scaled_form_matches_direct() {
        for x in [-20.0, -3.0, 0.5, 8.9, 9.5, 30.0] {
            let (s, z) = ai_scaled(x);
            let direct = ai(x);
            assert!((s * (-z).exp() - direct).abs() <= 1e-15 * direct.abs().max(1e-300));
        }
    }
}
