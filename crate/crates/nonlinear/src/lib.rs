//! Pseudo-spectral solver for the full perturbation system in the sheared
//! frame: primitive velocity stepping with exact per-mode viscous integrating
//! factors, a weighted energy ledger, and a transition-threshold scanner.

pub mod config;
pub mod init;
pub mod ledger;
pub mod rhs;
pub mod run;
pub mod scan;
pub mod stepper;

pub use config::{InitKind, OutputFrame, SimConfig};
pub use init::initial_state;
pub use ledger::EnergyLedger;
pub use rhs::{Dynamics, RhsComputer};
pub use run::{is_settled, run, run_with, to_stationary, RunResult, RunStatus, SimState};
pub use scan::{threshold_scan, ScanRow, ScanTable};
pub use stepper::Stepper;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NonlinearError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("right-hand side violates the divergence identity: residual {0:e}")]
    RhsDivergence(f64),
    #[error("state and solver grids differ")]
    GridMismatch,
    #[error("stationary-frame output needs k·t aligned with the η lattice (t = {0})")]
    FrameShift(f64),
    #[error(transparent)]
    Spectral(#[from] corioflow_spectral::SpectralError),
    #[error(transparent)]
    Linear(#[from] corioflow_linear::LinearError),
    #[error(transparent)]
    Multiplier(#[from] corioflow_multiplier::MultiplierError),
    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv output error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, NonlinearError>;
