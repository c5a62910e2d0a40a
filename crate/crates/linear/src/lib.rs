//! Per-mode linearized dynamics in the sheared frame.
//!
//! The linearization around the Couette-with-rotation equilibrium decouples
//! over Fourier modes once expressed in the good unknowns
//!
//! * Q = Δ_L u²  (sheared Laplacian of the wall-normal velocity),
//! * Ω² = ∂_z u¹ − ∂_x u³  (the "2-vorticity"),
//! * W = √(β/(β−1)) |∇_L| Ω²  (stable regime only, where the coupling
//!   between Q and W becomes skew-symmetric with frequency α = √(β(β−1))),
//!
//! plus the streamwise-and-spanwise mean (Ū₀¹, Ū₀³)(η), which obeys 1d heat
//! flow. k=0 modes admit exact closed forms in every regime; k≠0 modes are
//! propagated by a fourth-order scheme with the exact viscous integrating
//! factor, so the stiff −ν|κ(t)|² part costs nothing in accuracy.

pub mod dispersive;
pub mod evolve;
pub mod state;

pub use dispersive::{dispersive_decay_experiment, DispersiveSeries};
pub use evolve::{
    evolve_double_zero, evolve_nonzero_general, evolve_nonzero_mode, evolve_simple_zero,
    evolve_state, viscous_integrating_factor,
};
pub use state::{divergence_residual, reconstruct_velocity, velocity_to_unknowns, LinearState, UBar0};

use thiserror::Error;

/// Relative tolerance for the moving-frame divergence of input velocities.
pub const DIV_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LinearError {
    #[error("velocity field must have 3 components")]
    NotVelocity,
    #[error("field is not divergence-free in the moving frame: relative residual {0:e}")]
    NotDivergenceFree(f64),
    #[error("operation requires the stable regime (beta(beta-1) > 0), got beta={0}")]
    NotStableRegime(f64),
    #[error("k=0 modes are not handled by the nonzero-mode propagator")]
    KZeroMode,
    #[error("state carries k!=0 content where only k=0 modes are allowed")]
    NonzeroContent,
    #[error("data is not a pure simple-zero (k=0, l!=0) field")]
    NotSimpleZero,
    #[error("q/w carry k=l=0 content that belongs in ubar0")]
    DoubleZeroResidual,
    #[error("time range must satisfy t1 >= t0 with positive dt_max")]
    BadTimeRange,
    #[error("alpha must be a nonnegative real number, got {0}")]
    BadAlpha(f64),
    #[error(transparent)]
    Spectral(#[from] corioflow_spectral::SpectralError),
}

pub type Result<T> = std::result::Result<T, LinearError>;
