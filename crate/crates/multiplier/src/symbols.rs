//! Closed-form multiplier values and logarithmic derivatives.

use corioflow_spectral::ModeIndex;

use crate::{m_window_length, MultiplierError, Result};

fn check_mode(mode: &ModeIndex) -> Result<()> {
    if mode.k == 0 {
        return Err(MultiplierError::KZeroMode);
    }
    Ok(())
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu > 0.0) {
        return Err(MultiplierError::BadNu(nu));
    }
    Ok(())
}

/// Weight m: value 1 until the window [max(0, η/k), η/k + 1000ν^{−1/3}]
/// opens, then m(t) = √(|κ(entry)|²/|κ(t)|²) (the exact solution of
/// ṁ/m = k(η−kt)/|κ(t)|² continuous at entry), frozen after the window
/// closes. Returns (value, ṁ/m).
pub fn m_symbol(t: f64, mode: &ModeIndex, nu: f64) -> Result<(f64, f64)> {
    check_mode(mode)?;
    check_nu(nu)?;
    let tc = mode.eta / mode.k as f64;
    let entry = tc.max(0.0);
    let exit = tc + m_window_length(nu);
    if exit <= 0.0 || t < entry {
        return Ok((1.0, 0.0));
    }
    let ksq_entry = mode.kappa_norm_sq(entry);
    if t > exit {
        return Ok(((ksq_entry / mode.kappa_norm_sq(exit)).sqrt(), 0.0));
    }
    let ksq = mode.kappa_norm_sq(t);
    let shear = mode.eta - mode.k as f64 * t;
    Ok(((ksq_entry / ksq).sqrt(), mode.k as f64 * shear / ksq))
}

/// Weight M₁: solution of −Ṁ₁/M₁ = ν^{1/3}k²/(k²+ν^{2/3}(η−kt)²) with
/// M₁(0)=1, i.e. exp(arctan u(t) − arctan u(0)) with u = ν^{1/3}(η−kt)/k.
/// Returns (value, Ṁ₁/M₁); the value lies in (e^{−π}, 1].
pub fn m1_symbol(t: f64, mode: &ModeIndex, nu: f64) -> Result<(f64, f64)> {
    check_mode(mode)?;
    check_nu(nu)?;
    let nu13 = nu.powf(1.0 / 3.0);
    let k = mode.k as f64;
    let u = |s: f64| nu13 * (mode.eta - k * s) / k;
    let value = (u(t).atan() - u(0.0).atan()).exp();
    let shear = mode.eta - k * t;
    let dlog = -nu13 * k * k / (k * k + nu13 * nu13 * shear * shear);
    Ok((value, dlog))
}

/// Weight M₂: solution of −Ṁ₂/M₂ = k²/|κ(t)|² with M₂(0)=1, i.e.
/// exp((k/b)(arctan u(t) − arctan u(0))) with b = √(k²+l²), u = (η−kt)/b.
/// Returns (value, Ṁ₂/M₂); the value lies in (e^{−π}, 1].
pub fn m2_symbol(t: f64, mode: &ModeIndex) -> Result<(f64, f64)> {
    check_mode(mode)?;
    let k = mode.k as f64;
    let b = ((mode.k * mode.k + mode.l * mode.l) as f64).sqrt();
    let u = |s: f64| (mode.eta - k * s) / b;
    let value = ((k / b) * (u(t).atan() - u(0.0).atan())).exp();
    let dlog = -k * k / mode.kappa_norm_sq(t);
    Ok((value, dlog))
}

/// Composite weight 𝒜 = m·M₁·M₂·e^{δν^{1/3}t}.
pub fn a_symbol(t: f64, mode: &ModeIndex, nu: f64, delta: f64) -> Result<f64> {
    if delta < 0.0 {
        return Err(MultiplierError::BadDelta(delta));
    }
    let (m, _) = m_symbol(t, mode, nu)?;
    let (m1, _) = m1_symbol(t, mode, nu)?;
    let (m2, _) = m2_symbol(t, mode)?;
    Ok(m * m1 * m2 * (delta * nu.powf(1.0 / 3.0) * t).exp())
}

/// All multiplier values and logarithmic derivatives at one (t, mode).
#[derive(Debug, Clone)]
pub struct MultiplierSample {
    pub t: f64,
    pub mode: ModeIndex,
    pub nu: f64,
    pub delta: f64,
    pub m: f64,
    pub m1: f64,
    pub m2: f64,
    pub a: f64,
    pub dlog_m: f64,
    pub dlog_m1: f64,
    pub dlog_m2: f64,
}

pub fn sample(t: f64, mode: ModeIndex, nu: f64, delta: f64) -> Result<MultiplierSample> {
    let (m, dlog_m) = m_symbol(t, &mode, nu)?;
    let (m1, dlog_m1) = m1_symbol(t, &mode, nu)?;
    let (m2, dlog_m2) = m2_symbol(t, &mode)?;
    let a = a_symbol(t, &mode, nu, delta)?;
    Ok(MultiplierSample {
        t,
        mode,
        nu,
        delta,
        m,
        m1,
        m2,
        a,
        dlog_m,
        dlog_m1,
        dlog_m2,
    })
}
