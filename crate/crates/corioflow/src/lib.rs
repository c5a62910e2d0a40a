//! Experiment harness: decay-rate fitting, figure-data emission, and the
//! acceptance suite exercised by both the CLI and the integration tests.

pub mod acceptance;
pub mod criteria;
pub mod figures;
pub mod fit;

pub use acceptance::{run_acceptance, AcceptanceReport, Corruption, CriterionOutcome};
pub use figures::{emit_figure_data, figure_csv, FigureKind, FigureParams};
pub use fit::{fit_exp_rate, fit_power_law, FitResult};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("fit window ({0}, {1}) is not ordered")]
    BadWindow(f64, f64),
    #[error("need at least {min} samples inside the fit window, found {found}")]
    TooFewSamples { min: usize, found: usize },
    #[error("fit requires positive values, found {0}")]
    NonpositiveValue(f64),
    #[error("power-law fit requires positive times, found {0}")]
    NonpositiveTime(f64),
    #[error(transparent)]
    Regime(#[from] corioflow_regimes::RegimeError),
    #[error(transparent)]
    Multiplier(#[from] corioflow_multiplier::MultiplierError),
    #[error(transparent)]
    Linear(#[from] corioflow_linear::LinearError),
    #[error(transparent)]
    Nonlinear(#[from] corioflow_nonlinear::NonlinearError),
    #[error(transparent)]
    Spectral(#[from] corioflow_spectral::SpectralError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
