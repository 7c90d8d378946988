//! Power-law exponent fitting by ordinary least squares in log-log space.

use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Result of fitting `ln y = slope * ln x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

/// Fits `y = exp(intercept) * x^slope` to positive data. Exact on noiseless
/// power laws. A constant `y` fits with slope 0 and `r_squared = 1` (the
/// residuals vanish even though the variance does too).
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::Config(format!(
            "power-law fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    let mut logs: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::Config(format!(
                "power-law fit needs positive finite points, got ({x}, {y})"
            )));
        }
        logs.push((libm::log(x), libm::log(y)));
    }
    let n = logs.len() as f64;
    let mean_x = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in &logs {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Config(
            "power-law fit needs at least two distinct x values".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = (syy - slope * sxy).max(0.0);
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        points_used: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn exact_on_noiseless_law() {
        // y = 3 x^(-1/2)
        let points: Vec<(f64, f64)> = [1.0, 4.0, 9.0, 25.0, 100.0]
            .iter()
            .map(|&x| (x, 3.0 * libm::pow(x, -0.5)))
            .collect();
        let fit = fit_power_law(&points).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - libm::log(3.0)).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.points_used, 5);
    }

    #[test]
    fn constant_y_has_zero_slope() {
        let points = vec![(1.0, 2.5), (2.0, 2.5), (8.0, 2.5)];
        let fit = fit_power_law(&points).unwrap();
        assert!(fit.slope.abs() < 1e-15);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn noisy_half_law_stays_near_half() {
        // y = x^(-1/2) (1 + eps) with seeded +-1% noise, 5 points.
        let mut rng = SplitMix64::new(2024);
        let points: Vec<(f64, f64)> = [10.0, 40.0, 160.0, 640.0, 2560.0]
            .iter()
            .map(|&x| {
                let eps = 0.01 * (2.0 * rng.next_unit() - 1.0);
                (x, libm::pow(x, -0.5) * (1.0 + eps))
            })
            .collect();
        let fit = fit_power_law(&points).unwrap();
        assert!(
            fit.slope >= -0.52 && fit.slope <= -0.48,
            "slope {}",
            fit.slope
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_power_law(&[(1.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (-2.0, 3.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 0.0), (2.0, 3.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
    }
}
