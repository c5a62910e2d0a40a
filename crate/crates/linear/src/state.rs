//! Good unknowns: change of variables between velocity and (Q, W/Ω², Ū₀).

use num_complex::Complex64;

use corioflow_regimes::b_beta;
use corioflow_spectral::{Frame, Grid, SpectralField};

use crate::{LinearError, Result, DIV_TOL};

/// Streamwise-and-spanwise mean flow (Ū₀¹, Ū₀³) over the η lattice. The
/// wall-normal mean Ū₀² vanishes identically (incompressibility) and is
/// never stored.
#[derive(Debug, Clone)]
pub struct UBar0 {
    pub etas: Vec<f64>,
    pub u1: Vec<Complex64>,
    pub u3: Vec<Complex64>,
}

impl UBar0 {
    pub fn zeros(grid: &Grid) -> Self {
        let etas: Vec<f64> = (0..grid.ny()).map(|j| grid.eta(j)).collect();
        let n = etas.len();
        Self {
            etas,
            u1: vec![Complex64::new(0.0, 0.0); n],
            u3: vec![Complex64::new(0.0, 0.0); n],
        }
    }
}

/// The linear system's state: scalar fields for the good unknowns plus the
/// mean flow, tagged with the physical parameters.
///
/// `w` is populated exactly when β(β−1) > 0; `omega2` is always populated
/// (in the stable regime the two are related by W = √(β/(β−1))|∇_L|Ω²).
/// Neither `q`, `w` nor `omega2` carries (k=0, l=0) energy — that line lives
/// in `ubar0`.
#[derive(Debug, Clone)]
pub struct LinearState {
    pub q: SpectralField,
    pub w: Option<SpectralField>,
    pub omega2: SpectralField,
    pub ubar0: UBar0,
    pub beta: f64,
    pub nu: f64,
    pub time: f64,
}

/// Max over modes of |κ(t)·Û| measured against the largest |κ(t)||Û| in the
/// field (zero for the zero field).
pub fn divergence_residual(u: &SpectralField, t: f64) -> f64 {
    let grid = u.grid();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                let mode = grid.mode(i, j, m);
                let kappa = mode.kappa(t);
                let v = [u.get(0, i, j, m), u.get(1, i, j, m), u.get(2, i, j, m)];
                let div = kappa[0] * v[0] + kappa[1] * v[1] + kappa[2] * v[2];
                let knorm = (kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2])
                    .sqrt();
                let vnorm = (v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()).sqrt();
                worst = worst.max(div.norm());
                scale = scale.max(knorm * vnorm);
            }
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        worst / scale
    }
}

/// Converts a divergence-free moving-frame velocity into the good unknowns
/// at time `t`: Q̂ = −|κ|²Û², Ω̂² = ilÛ¹ − ikÛ³, Ŵ = √(β/(β−1))|κ|Ω̂²
/// (stable regime only), and the mean flow read off the (k,l)=(0,0) line.
pub fn velocity_to_unknowns(
    u: &SpectralField,
    beta: f64,
    nu: f64,
    t: f64,
) -> Result<LinearState> {
    if u.components() != 3 {
        return Err(LinearError::NotVelocity);
    }
    let residual = divergence_residual(u, t);
    if residual > DIV_TOL {
        return Err(LinearError::NotDivergenceFree(residual));
    }
    let grid = u.grid().clone();
    let stable = b_beta(beta) > 0.0;
    let ratio = if stable {
        (beta / (beta - 1.0)).sqrt()
    } else {
        0.0
    };

    let mut q = SpectralField::zeros(grid.clone(), 1, Frame::Moving, t);
    let mut omega2 = SpectralField::zeros(grid.clone(), 1, Frame::Moving, t);
    let mut w = if stable {
        Some(SpectralField::zeros(grid.clone(), 1, Frame::Moving, t))
    } else {
        None
    };
    let mut ubar0 = UBar0::zeros(&grid);

    // The mean of u² must vanish for the state to be representable.
    let umax = u.coeffs().iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let mean_u2 = u.get_mode(1, 0, 0, 0).norm();
    if umax > 0.0 && mean_u2 > DIV_TOL * umax.max(1.0) {
        return Err(LinearError::NotDivergenceFree(mean_u2 / umax));
    }

    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                let mode = grid.mode(i, j, m);
                if mode.k == 0 && mode.l == 0 {
                    ubar0.u1[j] = u.get(0, i, j, m);
                    ubar0.u3[j] = u.get(2, i, j, m);
                    continue;
                }
                let ksq = mode.kappa_norm_sq(t);
                let u1 = u.get(0, i, j, m);
                let u2 = u.get(1, i, j, m);
                let u3 = u.get(2, i, j, m);
                let qv = -ksq * u2;
                let ov = Complex64::i() * (mode.l as f64 * u1 - mode.k as f64 * u3);
                q.set(0, i, j, m, qv);
                omega2.set(0, i, j, m, ov);
                if let Some(wf) = w.as_mut() {
                    wf.set(0, i, j, m, ratio * ksq.sqrt() * ov);
                }
            }
        }
    }

    Ok(LinearState {
        q,
        w,
        omega2,
        ubar0,
        beta,
        nu,
        time: t,
    })
}

/// Assembles the moving-frame velocity from the good unknowns:
/// Û² = −Q̂/|κ|², and with κ₂ = η−kt,
///
///   Û¹ = (−i l Ω̂² + k κ₂ Q̂/|κ|²) / (k²+l²),
///   Û³ = (+i k Ω̂² + l κ₂ Q̂/|κ|²) / (k²+l²),
///
/// which inverts Q/Ω² and is divergence-free by construction. In the stable
/// regime Ω̂² is recovered from Ŵ first. The (k,l)=(0,0) line comes from
/// `ubar0` with Û² = 0 there.
pub fn reconstruct_velocity(state: &LinearState) -> Result<SpectralField> {
    let grid = state.q.grid().clone();
    let t = state.time;
    let stable = b_beta(state.beta) > 0.0;
    let inv_ratio = if stable {
        ((state.beta - 1.0) / state.beta).sqrt()
    } else {
        0.0
    };
    let mut u = SpectralField::zeros(grid.clone(), 3, Frame::Moving, t);

    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                let mode = grid.mode(i, j, m);
                if mode.k == 0 && mode.l == 0 {
                    if state.q.get(0, i, j, m).norm() > 0.0
                        || state.omega2.get(0, i, j, m).norm() > 0.0
                    {
                        return Err(LinearError::DoubleZeroResidual);
                    }
                    u.set(0, i, j, m, state.ubar0.u1[j]);
                    u.set(2, i, j, m, state.ubar0.u3[j]);
                    continue;
                }
                let ksq = mode.kappa_norm_sq(t);
                let kappa2 = mode.eta - mode.k as f64 * t;
                let kf = mode.k as f64;
                let lf = mode.l as f64;
                let klsq = kf * kf + lf * lf;
                let qv = state.q.get(0, i, j, m);
                let ov = match (&state.w, stable) {
                    (Some(wf), true) => inv_ratio * wf.get(0, i, j, m) / ksq.sqrt(),
                    _ => state.omega2.get(0, i, j, m),
                };
                let q_over = qv / ksq;
                let u1 = (-Complex64::i() * lf * ov + kf * kappa2 * q_over) / klsq;
                let u3 = (Complex64::i() * kf * ov + lf * kappa2 * q_over) / klsq;
                u.set(0, i, j, m, u1);
                u.set(1, i, j, m, -q_over);
                u.set(2, i, j, m, u3);
            }
        }
    }
    Ok(u)
}
