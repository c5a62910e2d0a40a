//! Simulation driver: initialization, stepping with blow-up surveillance,
//! ledger recording, and snapshot/CSV output.

use std::path::Path;

use corioflow_spectral::snapshot::write_snapshot;
use corioflow_spectral::{Frame, SpectralField};

use crate::config::{OutputFrame, SimConfig};
use crate::init::initial_state;
use crate::ledger::EnergyLedger;
use crate::rhs::Dynamics;
use crate::stepper::Stepper;
use crate::{NonlinearError, Result};

/// Moving-frame solution state.
#[derive(Debug, Clone)]
pub struct SimState {
    pub u: SpectralField,
    pub beta: f64,
    pub nu: f64,
    pub delta: f64,
    pub time: f64,
    pub step_count: u64,
}

impl SimState {
    pub fn is_finite(&self) -> bool {
        self.u
            .coeffs()
            .iter()
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    BlowUp,
    ToleranceFail,
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RunStatus::Completed => "completed",
            RunStatus::BlowUp => "blow_up",
            RunStatus::ToleranceFail => "tolerance_fail",
        };
        f.write_str(s)
    }
}

#[derive(Debug)]
pub struct RunResult {
    pub ledger: EnergyLedger,
    pub state: SimState,
    pub status: RunStatus,
}

const DIV_RUN_TOL: f64 = 1e-10;
/// Blow-up when any bootstrap column exceeds this multiple of ε².
const BLOWUP_FACTOR: f64 = 1e4;

/// Re-expresses a moving-frame field in stationary coordinates by shifting
/// each η row by k·t. Rows that leave the lattice are truncated; shifts that
/// fall between lattice rows are an error.
pub fn to_stationary(field: &SpectralField, t: f64) -> Result<SpectralField> {
    let grid = field.grid().clone();
    let mut out = SpectralField::zeros(grid.clone(), field.components(), Frame::Stationary, t);
    let de = grid.delta_eta();
    for i in 0..grid.nx() {
        let k = grid.kx(i);
        let shift = k as f64 * t / de;
        let rows = shift.round();
        if (shift - rows).abs() > 1e-8 * shift.abs().max(1.0) {
            return Err(NonlinearError::FrameShift(t));
        }
        let rows = rows as i64;
        for j in 0..grid.ny() {
            let target = grid.eta_int(j) - rows;
            // representable η rows excluding the ambiguous Nyquist row
            let half = grid.ny() as i64 / 2;
            if target <= -half || target >= half {
                continue;
            }
            for m in 0..grid.nz() {
                for c in 0..field.components() {
                    let v = field.get(c, i, j, m);
                    if v.norm_sqr() > 0.0 {
                        out.set_mode(c, k, target, grid.lz(m), v);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn write_state_snapshot(
    state: &SimState,
    cfg: &SimConfig,
    dir: &Path,
    name: &str,
) -> Result<()> {
    let path = dir.join(name);
    match cfg.output.frame {
        OutputFrame::Moving => write_snapshot(&state.u, &path)?,
        OutputFrame::Stationary => {
            let converted = to_stationary(&state.u, state.time)?;
            write_snapshot(&converted, &path)?;
        }
    }
    Ok(())
}

pub fn run(cfg: &SimConfig) -> Result<RunResult> {
    run_with(cfg, Dynamics::Full)
}

/// Like [`run`] but with selectable dynamics (the linearized variant backs
/// oracle comparisons and the scanner's no-transition sanity hook).
pub fn run_with(cfg: &SimConfig, dynamics: Dynamics) -> Result<RunResult> {
    cfg.validate()?;
    let mut state = initial_state(cfg)?;
    let stepper = Stepper::with_dynamics(
        state.u.grid(),
        cfg.physics.beta,
        cfg.physics.nu,
        dynamics,
    );
    let mut ledger = EnergyLedger::new(cfg.sobolev.n);
    let blow_limit = BLOWUP_FACTOR * cfg.init.epsilon * cfg.init.epsilon;

    if let Some(dir) = &cfg.output.dir {
        std::fs::create_dir_all(dir)?;
    }

    ledger.record(&state, stepper.transformer())?;
    let mut status = RunStatus::Completed;
    let t_end = cfg.time.t_end;
    let interval = cfg.time.ledger_interval;
    let mut next_record = state.time + interval;
    let snap_every = cfg.output.snapshot_interval;
    let mut next_snap = if snap_every > 0.0 {
        Some(state.time + snap_every)
    } else {
        None
    };
    let mut snap_idx = 0usize;
    let eps_time = 1e-9 * cfg.time.dt.max(1.0);

    while state.time < t_end - eps_time {
        let dt = cfg.time.dt.min(t_end - state.time);
        state = stepper.step(&state, dt)?;

        if !state.is_finite() {
            status = RunStatus::BlowUp;
            break;
        }
        let mut recorded = false;
        if state.time + eps_time >= next_record || state.time >= t_end - eps_time {
            ledger.record(&state, stepper.transformer())?;
            recorded = true;
            while next_record <= state.time + eps_time {
                next_record += interval;
            }
        }
        if recorded {
            if !ledger.last_finite() || ledger.bootstrap_peak() > blow_limit {
                status = RunStatus::BlowUp;
                break;
            }
            if *ledger.div_residual.last().unwrap() > DIV_RUN_TOL {
                status = RunStatus::ToleranceFail;
                break;
            }
        }
        if let (Some(ns), Some(dir)) = (next_snap, cfg.output.dir.as_deref()) {
            if state.time + eps_time >= ns {
                write_state_snapshot(&state, cfg, dir, &format!("snapshot_{snap_idx:05}.rcsf"))?;
                snap_idx += 1;
                next_snap = Some(ns + snap_every);
            }
        }
    }

    if status == RunStatus::Completed
        && ledger.times.last().map(|&t| t + eps_time < state.time).unwrap_or(true)
    {
        ledger.record(&state, stepper.transformer())?;
    }

    if let Some(dir) = &cfg.output.dir {
        ledger.write_csv(&dir.join("ledger.csv"))?;
        if state.is_finite() {
            write_state_snapshot(&state, cfg, dir, "final.rcsf")?;
        }
    }

    Ok(RunResult {
        ledger,
        state,
        status,
    })
}

/// Stability verdict used by the threshold scanner: the run finished and every
/// bootstrap column stayed within the certified envelope 100·ε².
pub fn is_settled(result: &RunResult, epsilon: f64) -> bool {
    result.status == RunStatus::Completed
        && result.ledger.bootstrap_peak() <= 100.0 * epsilon * epsilon
}
