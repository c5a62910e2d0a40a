//! TOML simulation configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use corioflow_spectral::Grid;

use crate::{NonlinearError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Physics {
    pub beta: f64,
    pub nu: f64,
    /// Exponential slack rate in the composite weight (default 0.01).
    pub delta: f64,
}

impl Default for Physics {
    fn default() -> Self {
        Physics {
            beta: 2.0,
            nu: 1e-2,
            delta: 0.01,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridCfg {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub ly: f64,
    /// Retained fraction per axis for dealiasing (default 2/3).
    pub dealias: f64,
}

impl Default for GridCfg {
    fn default() -> Self {
        GridCfg {
            nx: 32,
            ny: 64,
            nz: 32,
            ly: 32.0 * std::f64::consts::PI,
            dealias: 2.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeCfg {
    pub dt: f64,
    pub t_end: f64,
    pub ledger_interval: f64,
}

impl Default for TimeCfg {
    fn default() -> Self {
        TimeCfg {
            dt: 0.01,
            t_end: 10.0,
            ledger_interval: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    SeededRandom,
    File,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitCfg {
    pub kind: InitKind,
    pub epsilon: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl Default for InitCfg {
    fn default() -> Self {
        InitCfg {
            kind: InitKind::SeededRandom,
            epsilon: 1e-3,
            seed: 7,
            path: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SobolevCfg {
    pub n: usize,
}

impl Default for SobolevCfg {
    fn default() -> Self {
        SobolevCfg { n: 4 }
    }
}

/// Frame in which snapshots are written. The sheared frame stores η as laid
/// out; converting to the stationary frame shifts η by k·t, which bounds how
/// far a run may go before the shifted rows leave the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFrame {
    Moving,
    Stationary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputCfg {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// 0 disables periodic snapshots; the final state is always written when
    /// `dir` is set.
    pub snapshot_interval: f64,
    pub frame: OutputFrame,
}

impl Default for OutputCfg {
    fn default() -> Self {
        OutputCfg {
            dir: None,
            snapshot_interval: 0.0,
            frame: OutputFrame::Moving,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub physics: Physics,
    pub grid: GridCfg,
    pub time: TimeCfg,
    pub init: InitCfg,
    pub sobolev: SobolevCfg,
    pub output: OutputCfg,
}

impl SimConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn build_grid(&self) -> Result<Grid> {
        Ok(Grid::with_dealias(
            self.grid.nx,
            self.grid.ny,
            self.grid.nz,
            self.grid.ly,
            self.grid.dealias,
        )?)
    }

    /// Largest time the stationary-frame conversion stays on-lattice:
    /// the shifted frequency η − k·t must not exceed the resolved η range.
    pub fn stationary_t_cap(&self) -> f64 {
        let grid = match self.build_grid() {
            Ok(g) => g,
            Err(_) => return 0.0,
        };
        let k_max = grid.k_max().max(1) as f64;
        (self.grid.ny as f64) * std::f64::consts::PI / self.grid.ly / k_max
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(NonlinearError::Config(msg));
        if !(self.physics.nu > 0.0) {
            return fail(format!("physics.nu must be positive, got {}", self.physics.nu));
        }
        if !self.physics.beta.is_finite() {
            return fail("physics.beta must be finite".into());
        }
        if !(self.physics.delta >= 0.0) {
            return fail(format!(
                "physics.delta must be non-negative, got {}",
                self.physics.delta
            ));
        }
        self.build_grid()?;
        if !(self.time.dt > 0.0) {
            return fail(format!("time.dt must be positive, got {}", self.time.dt));
        }
        if !(self.time.t_end >= 0.0) {
            return fail(format!("time.t_end must be >= 0, got {}", self.time.t_end));
        }
        if !(self.time.ledger_interval > 0.0) {
            return fail(format!(
                "time.ledger_interval must be positive, got {}",
                self.time.ledger_interval
            ));
        }
        if !(self.init.epsilon >= 0.0) {
            return fail(format!(
                "init.epsilon must be non-negative, got {}",
                self.init.epsilon
            ));
        }
        if self.init.kind == InitKind::File && self.init.path.is_none() {
            return fail("init.kind = \"file\" requires init.path".into());
        }
        if self.sobolev.n == 0 {
            return fail("sobolev.n must be at least 1".into());
        }
        if !(self.output.snapshot_interval >= 0.0) {
            return fail(format!(
                "output.snapshot_interval must be >= 0, got {}",
                self.output.snapshot_interval
            ));
        }
        if self.output.frame == OutputFrame::Stationary {
            let cap = self.stationary_t_cap();
            if self.time.t_end > cap {
                return fail(format!(
                    "stationary-frame output resolves sheared frequencies only up to \
                     t = {cap:.4}; requested t_end = {} (shorten the run or use \
                     output.frame = \"moving\")",
                    self.time.t_end
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_roundtrip() {
        let cfg = SimConfig::default();
        cfg.validate().unwrap();
        let text = toml::to_string(&cfg).unwrap();
        let back = SimConfig::from_toml_str(&text).unwrap();
        assert_eq!(back.grid.nx, 32);
        assert_eq!(back.sobolev.n, 4);
        assert!(matches!(back.init.kind, InitKind::SeededRandom));
        assert!(matches!(back.output.frame, OutputFrame::Moving));
    }

    #[test]
    fn partial_toml_fills_defaults() {
        let cfg = SimConfig::from_toml_str(
            r#"
            [physics]
            beta = 0.5
            nu = 1e-3

            [time]
            t_end = 3.0
            "#,
        )
        .unwrap();
        assert_eq!(cfg.physics.beta, 0.5);
        assert_eq!(cfg.physics.delta, 0.01);
        assert_eq!(cfg.time.t_end, 3.0);
        assert_eq!(cfg.grid.ny, 64);
    }

    #[test]
    fn rejects_bad_values_and_unknown_keys() {
        assert!(SimConfig::from_toml_str("[physics]\nnu = 0.0").is_err());
        assert!(SimConfig::from_toml_str("[time]\ndt = -1.0").is_err());
        assert!(SimConfig::from_toml_str("[grid]\nnx = 3").is_err());
        assert!(SimConfig::from_toml_str("[init]\nkind = \"file\"").is_err());
        assert!(SimConfig::from_toml_str("[physics]\nwhatever = 1.0").is_err());
    }

    #[test]
    fn stationary_frame_capped_by_shear_resolution() {
        let mut cfg = SimConfig::default();
        cfg.output.frame = OutputFrame::Stationary;
        // Default grid: eta range +-1/2*ny*delta_eta = +-2, k_max = 10, so the
        // cap is 0.2 while t_end defaults to 10.
        assert!(cfg.validate().is_err());
        cfg.time.t_end = 0.19;
        cfg.validate().unwrap();
        cfg.output.frame = OutputFrame::Moving;
        cfg.time.t_end = 1e4;
        cfg.validate().unwrap();
    }
}
