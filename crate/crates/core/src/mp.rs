//! The Marchenko-Pastur singular-value law: density, CDF, quantiles, and
//! Kolmogorov-Smirnov distances against empirical spectra.
//!
//! The density is
//!
//! ```text
//! rho(s) = sqrt(((1 + sqrt(g))^2 - s^2) (s^2 - |1 - sqrt(g)|^2)) / (2 pi g |s|)
//! ```
//!
//! taken as an even function of `s`: the quintic iteration acts on signed
//! spectra, and the even extension is what makes this expression a proper
//! probability density. Its support is the symmetric set
//! `lower <= |s| <= upper` with `lower = |1 - sqrt(g)| * sigma_bar` and
//! `upper = (1 + sqrt(g)) * sigma_bar`, over which it integrates to 1 (half
//! the mass on each side). [`mp_cdf`] is the distribution function of the
//! magnitude `|S|` — the thing an empirical spectrum of non-negative
//! singular values is compared against — so it rises from 0 at the lower
//! edge to 1 at the upper edge.
//!
//! For `gamma = 1` the lower edge is 0 and the `s` in the denominator
//! cancels against the radicand; the density is evaluated through that
//! algebraically simplified form, giving the analytic limit
//! `1 / (pi sigma_bar)` at `s = 0` instead of 0/0.
//!
//! Quadrature runs in the substituted variable `s^2 = l^2 cos^2(t) + u^2
//! sin^2(t)`, which absorbs the square-root vanishing at both edges and
//! leaves a smooth integrand for adaptive Simpson.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg::Spectrum;
use crate::{Error, Result};

/// Parameters of the law: aspect ratio `gamma` in `(0, 1]` and the scale
/// `sigma_bar > 0`. Scaling by `sigma_bar` stretches the support and
/// compresses the density: `rho(s) = rho_1(s / sigma_bar) / sigma_bar`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpParams {
    gamma: f64,
    sigma_bar: f64,
}

impl MpParams {
    pub fn new(gamma: f64, sigma_bar: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::Config(format!(
                "gamma must be in (0, 1], got {gamma}"
            )));
        }
        if !(sigma_bar > 0.0) || !sigma_bar.is_finite() {
            return Err(Error::Config(format!(
                "sigma_bar must be positive and finite, got {sigma_bar}"
            )));
        }
        Ok(Self { gamma, sigma_bar })
    }

    /// `gamma = out_d / in_d`, unit scale.
    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sigma_bar(&self) -> f64 {
        self.sigma_bar
    }

    /// `|1 - sqrt(gamma)| * sigma_bar`.
    pub fn lower_edge(&self) -> f64 {
        (1.0 - libm::sqrt(self.gamma)).abs() * self.sigma_bar
    }

    /// `(1 + sqrt(gamma)) * sigma_bar`.
    pub fn upper_edge(&self) -> f64 {
        (1.0 + libm::sqrt(self.gamma)) * self.sigma_bar
    }
}

/// The density at `s` (even in `s`): the formula above strictly inside the
/// support, 0 outside, 0 at the edges — except the `gamma = 1` lower edge,
/// where the analytic limit applies.
pub fn mp_density(s: f64, p: &MpParams) -> f64 {
    let t = (s / p.sigma_bar).abs();
    let sq_g = libm::sqrt(p.gamma);
    let lo = (1.0 - sq_g).abs();
    let up = 1.0 + sq_g;
    if t < lo || t > up {
        return 0.0;
    }
    let up_gap = up * up - t * t;
    if p.gamma == 1.0 {
        // Simplified form: sqrt((up^2 - t^2) t^2) / (2 pi t) with the t
        // cancelled, valid on the whole support including t = 0.
        return libm::sqrt(up_gap.max(0.0)) / (2.0 * PI) / p.sigma_bar;
    }
    let lo_gap = t * t - lo * lo;
    if up_gap <= 0.0 || lo_gap <= 0.0 {
        return 0.0;
    }
    libm::sqrt(up_gap * lo_gap) / (2.0 * PI * p.gamma * t) / p.sigma_bar
}

/// Smooth integrand after the substitution `t(theta)^2 = lo^2 cos^2 +
/// up^2 sin^2` (unit scale): the magnitude-law CDF is its integral from 0.
fn cdf_integrand(theta: f64, gamma: f64) -> f64 {
    let sq_g = libm::sqrt(gamma);
    let lo = (1.0 - sq_g).abs();
    let up = 1.0 + sq_g;
    let sin = libm::sin(theta);
    let cos = libm::cos(theta);
    if lo == 0.0 {
        // gamma = 1: the sin^2 cancels, leaving a plain cosine arch.
        return up * up * cos * cos / (PI * gamma);
    }
    let span = up * up - lo * lo;
    let t_sq = lo * lo * cos * cos + up * up * sin * sin;
    span * span * sin * sin * cos * cos / (PI * gamma * t_sq)
}

/// Adaptive Simpson on `[a, b]`.
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, a, b);
    recurse(f, a, b, fa, fm, fb, whole, tol, 40)
}

const CDF_TOL: f64 = 1e-9;

/// CDF of the singular-value magnitude: 0 at and below the lower edge,
/// 1 at and above the upper edge, monotone in between. The argument is a
/// magnitude, so anything negative is below the support.
pub fn mp_cdf(s: f64, p: &MpParams) -> f64 {
    let t = s / p.sigma_bar;
    let sq_g = libm::sqrt(p.gamma);
    let lo = (1.0 - sq_g).abs();
    let up = 1.0 + sq_g;
    if t <= lo {
        return 0.0;
    }
    if t >= up {
        return 1.0;
    }
    let ratio = ((t * t - lo * lo) / (up * up - lo * lo)).clamp(0.0, 1.0);
    let theta_star = libm::asin(libm::sqrt(ratio));
    let g = p.gamma;
    adaptive_simpson(&|theta| cdf_integrand(theta, g), 0.0, theta_star, CDF_TOL)
}

const QUANTILE_TOL: f64 = 1e-8;

/// Monotone inverse of [`mp_cdf`] by bisection, to `1e-8` in `s`.
pub fn mp_quantile(q: f64, p: &MpParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&q) || !q.is_finite() {
        return Err(Error::Config(format!(
            "quantile level must be in [0, 1], got {q}"
        )));
    }
    if q == 0.0 {
        return Ok(p.lower_edge());
    }
    if q == 1.0 {
        return Ok(p.upper_edge());
    }
    let mut lo = p.lower_edge();
    let mut hi = p.upper_edge();
    while hi - lo > QUANTILE_TOL {
        let mid = 0.5 * (lo + hi);
        if mp_cdf(mid, p) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A sorted sample of real values (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Sorts and validates: non-empty, all finite.
    pub fn from_values(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("empirical sample must be non-empty".into()));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite);
        }
        values.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { values })
    }

    pub fn from_spectrum(spectrum: &Spectrum) -> Self {
        let mut values = spectrum.values().to_vec();
        values.reverse(); // descending -> ascending
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sample count; at least 1 by construction.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Right-continuous empirical CDF: fraction of the sample `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let count = self.values.partition_point(|v| *v <= x);
        count as f64 / self.values.len() as f64
    }
}

/// One-sample Kolmogorov-Smirnov statistic against the MP magnitude law:
/// the supremum over the sample points of the gap between the empirical CDF
/// and [`mp_cdf`], both jump sides considered.
pub fn ks_statistic(sample: &EmpiricalDistribution, p: &MpParams) -> f64 {
    let n = sample.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sample.values().iter().enumerate() {
        let model = mp_cdf(x, p);
        let below = i as f64 / n;
        let above = (i + 1) as f64 / n;
        worst = worst.max((model - below).abs()).max((model - above).abs());
    }
    worst
}

/// Two-sample Kolmogorov-Smirnov statistic between empirical samples.
pub fn ks_between(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    let mut worst = 0.0f64;
    for &x in a.values().iter().chain(b.values()) {
        let d = (a.cdf(x) - b.cdf(x)).abs();
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn params_validate() {
        assert!(MpParams::new(0.0, 1.0).is_err());
        assert!(MpParams::new(1.5, 1.0).is_err());
        assert!(MpParams::new(0.5, 0.0).is_err());
        let p = MpParams::new(0.25, 2.0).unwrap();
        assert!((p.lower_edge() - 1.0).abs() < 1e-15);
        assert!((p.upper_edge() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn density_pointwise_values() {
        let p = MpParams::with_gamma(1.0).unwrap();
        // sqrt((4 - 1)(1 - 0)) / (2 pi * 1 * 1)
        let want = libm::sqrt(3.0) / (2.0 * PI);
        assert!((mp_density(1.0, &p) - want).abs() < 1e-12);
        assert_eq!(mp_density(5.0, &p), 0.0);
        assert_eq!(mp_density(p.upper_edge(), &p), 0.0);
        // gamma = 1 lower edge: the analytic limit, not 0/0.
        assert!((mp_density(0.0, &p) - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn density_vanishes_at_edges_for_gamma_below_one() {
        let p = MpParams::with_gamma(0.5).unwrap();
        assert_eq!(mp_density(p.lower_edge(), &p), 0.0);
        assert_eq!(mp_density(p.upper_edge(), &p), 0.0);
        let mid = 0.5 * (p.lower_edge() + p.upper_edge());
        assert!(mp_density(mid, &p) > 0.0);
    }

    #[test]
    fn density_is_even() {
        let p = MpParams::with_gamma(0.5).unwrap();
        for s in [0.6, 0.9, 1.3] {
            assert_eq!(mp_density(s, &p), mp_density(-s, &p));
        }
    }

    #[test]
    fn scale_rule() {
        // Density under sigma_bar != 1 equals (1/sigma_bar) rho(s/sigma_bar).
        let unit = MpParams::with_gamma(0.5).unwrap();
        let scaled = MpParams::new(0.5, 3.0).unwrap();
        for s in [0.9, 1.8, 3.0, 4.4, 5.0] {
            let want = mp_density(s / 3.0, &unit) / 3.0;
            assert!((mp_density(s, &scaled) - want).abs() <= 1e-10);
        }
    }

    #[test]
    fn cdf_edges_and_monotonicity() {
        for gamma in [0.25, 0.5, 1.0] {
            let p = MpParams::with_gamma(gamma).unwrap();
            assert_eq!(mp_cdf(p.lower_edge(), &p), 0.0);
            assert_eq!(mp_cdf(p.lower_edge() - 0.5, &p), 0.0);
            assert_eq!(mp_cdf(p.upper_edge() + 0.1, &p), 1.0);
            let just_under = mp_cdf(p.upper_edge() - 1e-9, &p);
            assert!((just_under - 1.0).abs() <= 1e-4, "gamma {gamma}: {just_under}");
            let mut last = 0.0;
            let steps = 64;
            for i in 0..=steps {
                let s = p.lower_edge()
                    + (p.upper_edge() - p.lower_edge()) * i as f64 / steps as f64;
                let c = mp_cdf(s, &p);
                assert!(c + 1e-12 >= last, "gamma {gamma}: cdf not monotone at {s}");
                last = c;
            }
        }
    }

    #[test]
    fn cdf_matches_coarse_riemann_oracle() {
        // Independent oracle: midpoint Riemann sum of the raw density.
        let p = MpParams::with_gamma(1.0).unwrap();
        let n = 20_000;
        let h = 1.0 / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            let s = (i as f64 + 0.5) * h;
            sum += 2.0 * mp_density(s, &p) * h;
        }
        let got = mp_cdf(1.0, &p);
        assert!((got - sum).abs() <= 1e-3, "quadrature {got} vs riemann {sum}");
        // And the closed form for this particular point.
        let analytic = (libm::sqrt(3.0) / 2.0 + 2.0 * libm::asin(0.5)) / PI;
        assert!((got - analytic).abs() <= 1e-8);
    }

    #[test]
    fn quantile_round_trips() {
        let p = MpParams::with_gamma(1.0).unwrap();
        assert_eq!(mp_quantile(0.0, &p).unwrap(), p.lower_edge());
        assert_eq!(mp_quantile(1.0, &p).unwrap(), p.upper_edge());
        let m = mp_quantile(0.5, &p).unwrap();
        assert!((mp_cdf(m, &p) - 0.5).abs() <= 1e-6);
        assert!(mp_quantile(-0.1, &p).is_err());
        assert!(mp_quantile(1.1, &p).is_err());
    }

    #[test]
    fn ks_of_quantile_grid_is_half_spacing() {
        let p = MpParams::with_gamma(0.5).unwrap();
        let n = 200;
        let sample: Vec<f64> = (1..=n)
            .map(|i| mp_quantile((i as f64 - 0.5) / n as f64, &p).unwrap())
            .collect();
        let sample = EmpiricalDistribution::from_values(sample).unwrap();
        let d = ks_statistic(&sample, &p);
        assert!(d <= 1.0 / n as f64 + 1e-6, "ks {d}");
    }

    #[test]
    fn ks_disjoint_support_is_one() {
        let p = MpParams::with_gamma(0.5).unwrap();
        // Entirely below the lower edge (0.29...).
        let sample = EmpiricalDistribution::from_values(vec![0.01, 0.05, 0.1]).unwrap();
        assert_eq!(ks_statistic(&sample, &p), 1.0);
    }

    #[test]
    fn two_sample_ks_of_itself_is_zero() {
        let sample = EmpiricalDistribution::from_values(vec![0.3, 0.7, 1.1, 1.4]).unwrap();
        assert_eq!(ks_between(&sample, &sample), 0.0);
    }

    #[test]
    fn empty_sample_is_rejected() {
        assert!(EmpiricalDistribution::from_values(vec![]).is_err());
    }
}
