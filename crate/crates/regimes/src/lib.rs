//! Classification of the rotation/shear balance for Couette flow with a
//! Coriolis term of strength β.
//!
//! Everything hangs on the number B_β = β(β−1): it is negative exactly on
//! 0<β<1 (exponential instability of spanwise-varying k=0 modes), zero at the
//! two lift-up endpoints β∈{0,1}, and positive otherwise (oscillatory, damped
//! inertial waves with frequency α|l|/|η,l|, α=√B_β).

use num_complex::Complex64;
use thiserror::Error;

use corioflow_spectral::ModeIndex;

#[derive(Debug, Error)]
pub enum RegimeError {
    #[error("nu={0} outside (0,1)")]
    NuOutOfRange(f64),
    #[error("growth rate requires 0 < beta < 1, got beta={0}")]
    NotUnstableRegime(f64),
    #[error("stable eigenvalues require beta(beta-1) > 0, got beta={0}")]
    NotStableRegime(f64),
    #[error("(eta, l) = (0, 0) is singular for the dispersion relation")]
    ZeroTransverseFrequency,
    #[error("slope sigma must be nonzero")]
    ZeroSlope,
}

pub type Result<T> = std::result::Result<T, RegimeError>;

/// B_β = β(β−1) ∈ [−1/4, ∞), minimized at β = 1/2.
pub fn b_beta(beta: f64) -> f64 {
    beta * (beta - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeKind {
    /// β = 0: the classical lift-up mechanism (no rotation).
    LiftUpClassical,
    /// β = 1: lift-up again, with the roles of u¹ and u³ rotated.
    LiftUpRotated,
    /// 0 < β < 1: B_β < 0, exponential growth of k=0, l≠0 modes.
    ExponentiallyUnstable,
    /// B_β > 0: damped oscillatory inertial waves.
    Stable,
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegimeKind::LiftUpClassical => "lift_up_classical",
            RegimeKind::LiftUpRotated => "lift_up_rotated",
            RegimeKind::ExponentiallyUnstable => "exponentially_unstable",
            RegimeKind::Stable => "stable",
        };
        f.write_str(s)
    }
}

/// Outcome of [`classify`]; optional fields are populated only in the regime
/// where they are defined.
#[derive(Debug, Clone)]
pub struct RegimeReport {
    pub beta: f64,
    pub nu: f64,
    pub b_beta: f64,
    pub kind: RegimeKind,
    /// α = √B_β, the inertial-wave frequency scale (Stable only).
    pub alpha: Option<f64>,
    /// c_β = √(((β−1)²+β²)/B_β) ≥ √2, the reconstruction condition number
    /// (Stable only). Reported, never used to scale computations.
    pub c_beta: Option<f64>,
    /// √(−B_β) − ν, positive part of the maximal growth rate over |η,l| ≥ 1
    /// (ExponentiallyUnstable only).
    pub instability_margin: Option<f64>,
}

impl std::fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "beta={}", self.beta)?;
        writeln!(f, "nu={}", self.nu)?;
        writeln!(f, "b_beta={}", self.b_beta)?;
        writeln!(f, "kind={}", self.kind)?;
        if let Some(a) = self.alpha {
            writeln!(f, "alpha={a}")?;
        }
        if let Some(c) = self.c_beta {
            writeln!(f, "c_beta={c}")?;
        }
        if let Some(m) = self.instability_margin {
            writeln!(f, "instability_margin={m}")?;
        }
        Ok(())
    }
}

/// Places (β, ν) in the four-way trichotomy. The lift-up kinds are selected
/// by exact comparison at β=0 and β=1: users opt into those degenerate cases
/// explicitly.
pub fn classify(beta: f64, nu: f64) -> Result<RegimeReport> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(RegimeError::NuOutOfRange(nu));
    }
    let b = b_beta(beta);
    let kind = if beta == 0.0 {
        RegimeKind::LiftUpClassical
    } else if beta == 1.0 {
        RegimeKind::LiftUpRotated
    } else if b < 0.0 {
        RegimeKind::ExponentiallyUnstable
    } else {
        RegimeKind::Stable
    };
    let (alpha, c_beta, instability_margin) = match kind {
        RegimeKind::Stable => {
            let a = b.sqrt();
            let c = (((beta - 1.0).powi(2) + beta * beta) / b).sqrt();
            (Some(a), Some(c), None)
        }
        RegimeKind::ExponentiallyUnstable => (None, None, Some((-b).sqrt() - nu)),
        _ => (None, None, None),
    };
    Ok(RegimeReport {
        beta,
        nu,
        b_beta: b,
        kind,
        alpha,
        c_beta,
        instability_margin,
    })
}

fn check_transverse(eta: f64, l: i64) -> Result<f64> {
    let nsq = eta * eta + (l * l) as f64;
    if nsq == 0.0 {
        return Err(RegimeError::ZeroTransverseFrequency);
    }
    Ok(nsq)
}

/// Growth rate of the inflating branch at a k=0 mode (η, l) for 0<β<1:
/// λ⁺ = −ν(η²+l²) + √(β(1−β))·|l|/√(η²+l²).
///
/// Any ν ≥ 0 is accepted; only [`classify`] insists on ν ∈ (0,1).
pub fn growth_rate(beta: f64, nu: f64, eta: f64, l: i64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(RegimeError::NotUnstableRegime(beta));
    }
    let nsq = check_transverse(eta, l)?;
    Ok(-nu * nsq + (beta * (1.0 - beta)).sqrt() * l.unsigned_abs() as f64 / nsq.sqrt())
}

/// Eigenvalue pair −ν(η²+l²) ± i·√(β(β−1))·|l|/√(η²+l²) of the k=0 system in
/// the stable regime (B_β > 0), returned as (+branch, −branch).
pub fn stable_eigenvalues(beta: f64, nu: f64, eta: f64, l: i64) -> Result<(Complex64, Complex64)> {
    if !(b_beta(beta) > 0.0) {
        return Err(RegimeError::NotStableRegime(beta));
    }
    let nsq = check_transverse(eta, l)?;
    let re = -nu * nsq;
    let im = b_beta(beta).sqrt() * l.unsigned_abs() as f64 / nsq.sqrt();
    Ok((Complex64::new(re, im), Complex64::new(re, -im)))
}

/// The unstable frequency set S (positive growth rate) and its core S′
/// (rate above ½(√(−B_β)−ν)) over a sampled (η, l) lattice; members carry
/// k = 0.
#[derive(Debug, Clone, Default)]
pub struct InstabilitySets {
    pub s_members: Vec<ModeIndex>,
    pub s_prime_members: Vec<ModeIndex>,
}

pub fn instability_sets(
    beta: f64,
    nu: f64,
    eta_samples: &[f64],
    l_max: i64,
) -> Result<InstabilitySets> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(RegimeError::NotUnstableRegime(beta));
    }
    let threshold = 0.5 * ((beta * (1.0 - beta)).sqrt() - nu);
    let mut sets = InstabilitySets::default();
    for l in -l_max..=l_max {
        for &eta in eta_samples {
            if eta == 0.0 && l == 0 {
                continue;
            }
            let rate = growth_rate(beta, nu, eta, l)?;
            if rate > 0.0 {
                sets.s_members.push(ModeIndex::new(0, eta, l));
            }
            if rate > threshold {
                sets.s_prime_members.push(ModeIndex::new(0, eta, l));
            }
        }
    }
    Ok(sets)
}

/// Maps parameters of a slope-σ shear (V = (σy,0,0), rotation β, viscosity ν)
/// to the equivalent unit-slope parameters (β/σ, ν/σ).
pub fn rescale_slope(beta: f64, nu: f64, sigma: f64) -> Result<(f64, f64)> {
    if sigma == 0.0 {
        return Err(RegimeError::ZeroSlope);
    }
    Ok((beta / sigma, nu / sigma))
}
