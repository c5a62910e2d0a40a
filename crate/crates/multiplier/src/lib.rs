//! Ghost-multiplier suite for the sheared-frame energy method.
//!
//! Three scalar Fourier weights are evaluated in closed form per mode:
//!
//! * `m` — loses amplitude at rate k(η−kt)/|κ(t)|² on a window of length
//!   1000·ν^{−1/3} starting at the critical time η/k (clipped to t ≥ 0); its
//!   logarithmic derivative cancels the non-normal shear term in energy
//!   estimates.
//! * `M₁` — arctangent profile with rate ν^{1/3}k²/(k²+ν^{2/3}(η−kt)²),
//!   absorbing the enhanced-dissipation commutator.
//! * `M₂` — arctangent profile with rate k²/|κ(t)|², absorbing the
//!   inviscid-damping commutator. Its initial value is 1 so the weight is
//!   nontrivial (a vanishing initial value would freeze the ODE at zero).
//!
//! The composite weight is 𝒜 = m·M₁·M₂·e^{δν^{1/3}t}. All three defining
//! ODEs have closed-form antiderivatives; [`reference`] integrates the ODEs
//! numerically instead and exists purely to cross-check the closed forms.

pub mod bounds;
pub mod norms;
pub mod reference;
pub mod symbols;

pub use bounds::{check_m_bounds, MBoundsReport};
pub use norms::{weighted_sobolev_norm, Weight};
pub use symbols::{a_symbol, m1_symbol, m2_symbol, m_symbol, sample, MultiplierSample};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MultiplierError {
    #[error("multiplier is defined only for k != 0 modes")]
    KZeroMode,
    #[error("nu={0} must be > 0")]
    BadNu(f64),
    #[error("delta={0} must be >= 0")]
    BadDelta(f64),
    #[error("weighted norm requested on a field with k=0 energy")]
    KZeroContent,
}

pub type Result<T> = std::result::Result<T, MultiplierError>;

/// Length of the m-window, 1000·ν^{−1/3}.
pub fn m_window_length(nu: f64) -> f64 {
    1000.0 * nu.powf(-1.0 / 3.0)
}
