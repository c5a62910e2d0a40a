//! Least-squares decay-rate estimation on (t, value) series.

use crate::{HarnessError, Result};

pub const MIN_SAMPLES: usize = 8;

/// Straight-line fit of a transformed series over a time window.
#[derive(Debug, Clone, Copy)]
pub struct FitResult {
    /// Slope: the power-law exponent or the exponential rate.
    pub exponent: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1 for an exact (or constant) series.
    pub r_squared: f64,
    pub window: (f64, f64),
}

fn line_fit(xs: &[f64], ys: &[f64], window: (f64, f64)) -> FitResult {
    // A constant series would otherwise pick up spurious slope from mean roundoff.
    if ys.iter().all(|&y| y == ys[0]) {
        return FitResult {
            exponent: 0.0,
            intercept: ys[0],
            r_squared: 1.0,
            window,
        };
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    // Residual sum from the fitted line; the constant series is a perfect fit.
    let r_squared = if syy > 0.0 {
        let mut ss_res = 0.0;
        for (&x, &y) in xs.iter().zip(ys) {
            let r = y - (intercept + slope * x);
            ss_res += r * r;
        }
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    FitResult {
        exponent: slope,
        intercept,
        r_squared,
        window,
    }
}

fn windowed(series: &[(f64, f64)], window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    if !(window.0 < window.1) {
        return Err(HarnessError::BadWindow(window.0, window.1));
    }
    let inside: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|(t, _)| *t >= window.0 && *t <= window.1)
        .collect();
    if inside.len() < MIN_SAMPLES {
        return Err(HarnessError::TooFewSamples {
            min: MIN_SAMPLES,
            found: inside.len(),
        });
    }
    for &(_, v) in &inside {
        if !(v > 0.0) {
            return Err(HarnessError::NonpositiveValue(v));
        }
    }
    Ok(inside)
}

/// Fits log(value) against log(t) over the window: value ≈ C·t^exponent.
pub fn fit_power_law(series: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let inside = windowed(series, window)?;
    for &(t, _) in &inside {
        if !(t > 0.0) {
            return Err(HarnessError::NonpositiveTime(t));
        }
    }
    let xs: Vec<f64> = inside.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = inside.iter().map(|(_, v)| v.ln()).collect();
    Ok(line_fit(&xs, &ys, window))
}

/// Fits log(value) against t over the window: value ≈ C·e^(exponent·t).
pub fn fit_exp_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let inside = windowed(series, window)?;
    let xs: Vec<f64> = inside.iter().map(|(t, _)| *t).collect();
    let ys: Vec<f64> = inside.iter().map(|(_, v)| v.ln()).collect();
    Ok(line_fit(&xs, &ys, window))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series<F: Fn(f64) -> f64>(f: F, ts: &[f64]) -> Vec<(f64, f64)> {
        ts.iter().map(|&t| (t, f(t))).collect()
    }

    fn times(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn exact_power_law_recovered() {
        let ts = times(1.0, 100.0, 40);
        let fit = fit_power_law(&series(|t| t.powf(-1.0 / 3.0), &ts), (1.0, 100.0)).unwrap();
        assert!((fit.exponent + 1.0 / 3.0).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_series_has_zero_exponent() {
        let ts = times(1.0, 50.0, 12);
        let fit = fit_power_law(&series(|_| 7.0, &ts), (0.5, 60.0)).unwrap();
        assert_eq!(fit.exponent, 0.0);
        assert_eq!(fit.r_squared, 1.0);
        let fit = fit_exp_rate(&series(|_| 7.0, &ts), (0.5, 60.0)).unwrap();
        assert_eq!(fit.exponent, 0.0);
    }

    #[test]
    fn perturbed_power_law_within_tolerance() {
        let ts = times(10.0, 1000.0, 200);
        let fit = fit_power_law(
            &series(|t| t.powf(-1.0 / 3.0) * (1.0 + 0.01 * t.sin()), &ts),
            (10.0, 1000.0),
        )
        .unwrap();
        assert!((fit.exponent + 1.0 / 3.0).abs() < 0.02, "{}", fit.exponent);
    }

    #[test]
    fn exp_rates_exact_on_synthetic_data() {
        let ts = times(0.0, 30.0, 16);
        let fit = fit_exp_rate(&series(|t| (-0.1 * t).exp(), &ts), (0.0, 30.0)).unwrap();
        assert!((fit.exponent + 0.1).abs() < 1e-12);
        let fit = fit_exp_rate(&series(|t| (0.496 * t).exp(), &ts), (0.0, 30.0)).unwrap();
        assert!((fit.exponent - 0.496).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        let ts = times(1.0, 10.0, 20);
        let good = series(|t| t, &ts);
        assert!(matches!(
            fit_power_law(&good, (5.0, 5.0)),
            Err(HarnessError::BadWindow(..))
        ));
        assert!(matches!(
            fit_power_law(&good, (8.0, 9.0)),
            Err(HarnessError::TooFewSamples { .. })
        ));
        let with_zero: Vec<_> = ts.iter().map(|&t| (t, t - 5.0)).collect();
        assert!(matches!(
            fit_exp_rate(&with_zero, (1.0, 10.0)),
            Err(HarnessError::NonpositiveValue(..))
        ));
        let neg_time = series(|t| t.abs() + 1.0, &times(-2.0, 10.0, 30));
        assert!(matches!(
            fit_power_law(&neg_time, (-2.0, 10.0)),
            Err(HarnessError::NonpositiveTime(..))
        ));
    }
}
