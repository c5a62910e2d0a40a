//! Spectral discretization of the periodic channel T × R × T.
//!
//! The unbounded y direction is approximated by a long periodic box of length
//! `ly`, so y-frequencies live on the lattice η ∈ (2π/ly)·Z while the x- and
//! z-frequencies are integers. Per-mode dynamics downstream depend on η only
//! through continuous formulas, so a fine η lattice converges to the continuum
//! problem; convergence in `ly` is checked by the acceptance suite.
//!
//! Fields are dense complex coefficient arrays in FFT frequency order. The
//! sheared (moving) frame enters only through the symbols
//! [`grid::shear_frequency`] and [`grid::laplacian_l_symbol`]; storage is
//! frame-agnostic apart from the [`field::Frame`] tag.

pub mod convolve;
pub mod error;
pub mod field;
pub mod grid;
pub mod snapshot;
pub mod sum;
pub mod transform;

pub use convolve::convolve_dealiased;
pub use error::SpectralError;
pub use field::{Frame, SpectralField};
pub use grid::{laplacian_l_symbol, shear_frequency, Grid, ModeClass, ModeIndex};
pub use sum::KahanSum;
pub use transform::Transformer;

pub type Result<T> = std::result::Result<T, SpectralError>;
