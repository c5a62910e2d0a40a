//! Transition-threshold bisection over amplitude, per viscosity.

use rayon::prelude::*;

use crate::config::SimConfig;
use crate::rhs::Dynamics;
use crate::run::{is_settled, run_with};
use crate::{NonlinearError, Result};

#[derive(Debug, Clone)]
pub struct ScanRow {
    pub nu: f64,
    /// Final bracket: largest amplitude that settled, smallest that did not.
    pub eps_low: f64,
    pub eps_high: f64,
    /// Geometric midpoint of the final bracket; None on bracket failure.
    pub eps_critical: Option<f64>,
    /// Why no bracket exists, when eps_critical is None.
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ScanTable {
    pub beta: f64,
    pub rows: Vec<ScanRow>,
    /// Least-squares slope of log ε_critical against log ν (needs ≥ 2 valid
    /// rows).
    pub exponent: Option<f64>,
}

impl ScanTable {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("nu,eps_low,eps_high,eps_critical,note\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.nu,
                row.eps_low,
                row.eps_high,
                row.eps_critical
                    .map(|e| e.to_string())
                    .unwrap_or_default(),
                row.note.clone().unwrap_or_default()
            ));
        }
        out
    }
}

fn settles(base: &SimConfig, nu: f64, eps: f64, dynamics: Dynamics) -> Result<bool> {
    let mut cfg = base.clone();
    cfg.physics.nu = nu;
    cfg.init.epsilon = eps;
    cfg.output.dir = None;
    let result = run_with(&cfg, dynamics)?;
    Ok(is_settled(&result, eps))
}

/// For each viscosity, bisects the amplitude between a settling lower endpoint
/// and a transitioning upper endpoint. Rows are independent and run in
/// parallel; all randomness comes from the base config's seed.
pub fn threshold_scan(
    base: &SimConfig,
    nu_list: &[f64],
    eps_bounds: (f64, f64),
    bisection_steps: usize,
    dynamics: Dynamics,
) -> Result<ScanTable> {
    if bisection_steps == 0 {
        return Err(NonlinearError::Config(
            "bisection_steps must be at least 1".into(),
        ));
    }
    let (eps_min, eps_max) = eps_bounds;
    if !(eps_min > 0.0 && eps_max > eps_min) {
        return Err(NonlinearError::Config(format!(
            "amplitude bounds must satisfy 0 < min < max, got ({eps_min}, {eps_max})"
        )));
    }
    if nu_list.is_empty() {
        return Err(NonlinearError::Config("empty viscosity list".into()));
    }

    let rows: Result<Vec<ScanRow>> = nu_list
        .par_iter()
        .map(|&nu| {
            let low_ok = settles(base, nu, eps_min, dynamics)?;
            let high_ok = settles(base, nu, eps_max, dynamics)?;
            if low_ok == high_ok {
                let note = if low_ok {
                    "both endpoints settle; no transition inside the bracket"
                } else {
                    "both endpoints transition; lower the minimum amplitude"
                };
                return Ok(ScanRow {
                    nu,
                    eps_low: eps_min,
                    eps_high: eps_max,
                    eps_critical: None,
                    note: Some(note.into()),
                });
            }
            // Orient so that lo settles and hi does not (the reversed case is
            // pathological but still bisectable on the same information).
            let (mut lo, mut hi) = if low_ok {
                (eps_min, eps_max)
            } else {
                (eps_max, eps_min)
            };
            for _ in 0..bisection_steps {
                let mid = (lo * hi).sqrt();
                if settles(base, nu, mid, dynamics)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let (eps_low, eps_high) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            Ok(ScanRow {
                nu,
                eps_low,
                eps_high,
                eps_critical: Some((eps_low * eps_high).sqrt()),
                note: None,
            })
        })
        .collect();
    let rows = rows?;

    let fitted: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.eps_critical.map(|e| (r.nu.ln(), e.ln())))
        .collect();
    let exponent = if fitted.len() >= 2 {
        let n = fitted.len() as f64;
        let sx: f64 = fitted.iter().map(|p| p.0).sum();
        let sy: f64 = fitted.iter().map(|p| p.1).sum();
        let sxx: f64 = fitted.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = fitted.iter().map(|p| p.0 * p.1).sum();
        let denom = n * sxx - sx * sx;
        if denom.abs() > 0.0 {
            Some((n * sxy - sx * sy) / denom)
        } else {
            None
        }
    } else {
        None
    };

    Ok(ScanTable {
        beta: base.physics.beta,
        rows,
        exponent,
    })
}
