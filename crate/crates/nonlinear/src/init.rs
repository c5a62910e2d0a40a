//! Initial data: seeded random divergence-free fields with a prescribed
//! decaying spectrum, or snapshot files, both sanitized the same way.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use corioflow_spectral::{Frame, Grid, SpectralField};

use crate::config::{InitKind, SimConfig};
use crate::run::SimState;
use crate::{NonlinearError, Result};

/// Removes the (k,l)=(0,0) line and projects every remaining mode onto the
/// divergence-free subspace for the wavevector at time t.
fn sanitize(u: &mut SpectralField, t: f64) {
    let grid = u.grid().clone();
    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                let mode = grid.mode(i, j, m);
                if mode.k == 0 && mode.l == 0 {
                    for c in 0..3 {
                        u.set(c, i, j, m, Complex64::new(0.0, 0.0));
                    }
                    continue;
                }
                let kappa = mode.kappa(t);
                let ksq = kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2];
                let dot = kappa[0] * u.get(0, i, j, m)
                    + kappa[1] * u.get(1, i, j, m)
                    + kappa[2] * u.get(2, i, j, m);
                for c in 0..3 {
                    let v = u.get(c, i, j, m) - kappa[c] * dot / ksq;
                    u.set(c, i, j, m, v);
                }
            }
        }
    }
    u.enforce_conjugate_symmetry();
}

/// Squared Sobolev-type norm Σ ⟨k,η,l⟩^{2s} |û|² Δη over all components.
fn weighted_norm_sq(u: &SpectralField, s: i32) -> f64 {
    let grid = u.grid();
    let de = grid.delta_eta();
    let mut sum = corioflow_spectral::KahanSum::default();
    for c in 0..u.components() {
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                for m in 0..grid.nz() {
                    let w = grid.mode(i, j, m).bracket_sq().powi(s);
                    sum.add(w * u.get(c, i, j, m).norm_sqr() * de);
                }
            }
        }
    }
    sum.value()
}

/// Random divergence-free field with coefficient law ⟨k,η,l⟩^{−(n+3)} inside
/// the dealias ball, no (k,l)=(0,0) component, scaled so the order-(n+2)
/// weighted norm equals epsilon. Bit-reproducible for a given seed.
pub fn seeded_field(grid: &Grid, epsilon: f64, seed: u64, n: usize) -> SpectralField {
    let mut u = SpectralField::zeros(grid.clone(), 3, Frame::Moving, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let decay = -((n as f64) + 3.0) / 2.0;
    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                if !grid.in_dealias_ball(grid.kx(i), grid.eta_int(j), grid.lz(m)) {
                    continue;
                }
                let mode = grid.mode(i, j, m);
                if mode.k == 0 && mode.l == 0 {
                    continue;
                }
                let amp = mode.bracket_sq().powf(decay);
                for c in 0..3 {
                    let re = rng.gen::<f64>() * 2.0 - 1.0;
                    let im = rng.gen::<f64>() * 2.0 - 1.0;
                    u.set(c, i, j, m, amp * Complex64::new(re, im));
                }
            }
        }
    }
    sanitize(&mut u, 0.0);
    let nrm = weighted_norm_sq(&u, (n + 2) as i32).sqrt();
    if nrm > 0.0 {
        u.scale(epsilon / nrm);
    }
    u
}

/// Builds the starting state for a run according to the config.
pub fn initial_state(cfg: &SimConfig) -> Result<SimState> {
    let grid = cfg.build_grid()?;
    let u = match cfg.init.kind {
        InitKind::SeededRandom => {
            seeded_field(&grid, cfg.init.epsilon, cfg.init.seed, cfg.sobolev.n)
        }
        InitKind::File => {
            let path = cfg.init.path.as_ref().ok_or_else(|| {
                NonlinearError::Config("init.kind = \"file\" requires init.path".into())
            })?;
            let mut loaded = corioflow_spectral::snapshot::read_snapshot(path)?;
            let lg = loaded.grid();
            if (lg.nx(), lg.ny(), lg.nz()) != (grid.nx(), grid.ny(), grid.nz())
                || (lg.ly() - grid.ly()).abs() > 1e-12 * grid.ly()
            {
                return Err(NonlinearError::Config(format!(
                    "snapshot grid {}x{}x{} (ly={}) does not match config",
                    lg.nx(),
                    lg.ny(),
                    lg.nz(),
                    lg.ly()
                )));
            }
            if loaded.components() != 3 {
                return Err(NonlinearError::Config(format!(
                    "snapshot has {} components, expected 3",
                    loaded.components()
                )));
            }
            let t = loaded.time;
            sanitize(&mut loaded, t);
            loaded
        }
    };
    let time = u.time;
    Ok(SimState {
        u,
        beta: cfg.physics.beta,
        nu: cfg.physics.nu,
        delta: cfg.physics.delta,
        time,
        step_count: 0,
    })
}
