//! Time evolution: exact closed forms for the k=0 classes, fourth-order
//! integration with the exact viscous integrating factor for k≠0 modes.

use num_complex::Complex64;

use corioflow_regimes::b_beta;
use corioflow_spectral::{Grid, ModeIndex, SpectralField};

use crate::state::{LinearState, UBar0};
use crate::{LinearError, Result};

/// exp(−ν ∫_a^b |k, η−ks, l|² ds), via the polynomial antiderivative
/// (k²+l²)(b−a) + [(η−ka)³ − (η−kb)³]/(3k); constant |κ|² when k = 0.
pub fn viscous_integrating_factor(mode: &ModeIndex, nu: f64, a: f64, b: f64) -> f64 {
    let klsq = (mode.k * mode.k + mode.l * mode.l) as f64;
    let integral = if mode.k == 0 {
        (klsq + mode.eta * mode.eta) * (b - a)
    } else {
        let kf = mode.k as f64;
        let sa = mode.eta - kf * a;
        let sb = mode.eta - kf * b;
        klsq * (b - a) + (sa.powi(3) - sb.powi(3)) / (3.0 * kf)
    };
    (-nu * integral).exp()
}

/// Heat flow of the mean: each η-coefficient shrinks by e^{−νη²dt}.
pub fn evolve_double_zero(ubar0: &UBar0, nu: f64, dt: f64) -> UBar0 {
    let mut out = ubar0.clone();
    for (idx, &eta) in ubar0.etas.iter().enumerate() {
        let factor = (-nu * eta * eta * dt).exp();
        out.u1[idx] *= factor;
        out.u3[idx] *= factor;
    }
    out
}

fn max_nonzero_k_content(field: &SpectralField) -> f64 {
    let grid = field.grid();
    let mut worst = 0.0f64;
    for i in 0..grid.nx() {
        if grid.kx(i) == 0 {
            continue;
        }
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                worst = worst.max(field.get(0, i, j, m).norm());
            }
        }
    }
    worst
}

/// Advances the k=0, l≠0 lines of (q, w, omega2) in place by the exact
/// regime-dispatched closed forms. `beta`/`nu` as in the owning state.
fn advance_simple_zero_lines(
    grid: &Grid,
    q: &mut SpectralField,
    w: &mut Option<SpectralField>,
    omega2: &mut SpectralField,
    beta: f64,
    nu: f64,
    dt: f64,
) -> Result<()> {
    let b = b_beta(beta);
    let stable = b > 0.0;
    if stable && w.is_none() {
        return Err(LinearError::NotStableRegime(beta));
    }
    let i0 = 0usize; // k = 0 row
    for j in 0..grid.ny() {
        let eta = grid.eta(j);
        for m in 0..grid.nz() {
            let l = grid.lz(m);
            if l == 0 {
                continue;
            }
            let lf = l as f64;
            let nsq = eta * eta + lf * lf;
            let n = nsq.sqrt();
            let heat = (-nu * nsq * dt).exp();
            let qv = q.get(0, i0, j, m);
            let ov = omega2.get(0, i0, j, m);
            if beta == 1.0 {
                // Rotated lift-up: Ω² rides the heat flow, Q picks up the
                // secular −t·∂_z coupling.
                q.set(0, i0, j, m, heat * (qv - Complex64::i() * (dt * lf) * ov));
                omega2.set(0, i0, j, m, heat * ov);
            } else if beta == 0.0 {
                // Classical lift-up with the roles swapped.
                q.set(0, i0, j, m, heat * qv);
                omega2.set(
                    0,
                    i0,
                    j,
                    m,
                    heat * (ov + Complex64::i() * (dt * lf / nsq) * qv),
                );
            } else if b < 0.0 {
                // Diagonalize with D± = Q ± cΩ², c = i·sgn(l)·√(β/(1−β))·n;
                // D₋ carries the growing branch.
                let c = Complex64::i() * (lf.signum()) * (beta / (1.0 - beta)).sqrt() * n;
                let rate = (beta * (1.0 - beta)).sqrt() * lf.abs() / n;
                let dp = (qv + c * ov) * (heat * (-rate * dt).exp());
                let dm = (qv - c * ov) * (heat * (rate * dt).exp());
                q.set(0, i0, j, m, 0.5 * (dp + dm));
                omega2.set(0, i0, j, m, 0.5 * (dp - dm) / c);
            } else {
                // Stable: G± = Q ∓ sgn(l)·W rotate at ±α|l|/n under the heat
                // envelope — no lift-up growth.
                let wf = w.as_mut().unwrap();
                let wv = wf.get(0, i0, j, m);
                let s = lf.signum();
                let theta = b.sqrt() * lf.abs() / n * dt;
                let phase_p = Complex64::new(0.0, theta).exp();
                let gp = (qv - s * wv) * heat * phase_p;
                let gm = (qv + s * wv) * heat * phase_p.conj();
                let qn = 0.5 * (gp + gm);
                let wn = -s * 0.5 * (gp - gm);
                q.set(0, i0, j, m, qn);
                wf.set(0, i0, j, m, wn);
                omega2.set(
                    0,
                    i0,
                    j,
                    m,
                    ((beta - 1.0) / beta).sqrt() * wn / n,
                );
            }
        }
    }
    Ok(())
}

/// Exact propagation of a pure simple-zero state by dt. The mean flow is not
/// touched (it has its own heat evolution); any k≠0 content is an error.
pub fn evolve_simple_zero(state: &LinearState, dt: f64) -> Result<LinearState> {
    let mut content = max_nonzero_k_content(&state.q).max(max_nonzero_k_content(&state.omega2));
    if let Some(wf) = &state.w {
        content = content.max(max_nonzero_k_content(wf));
    }
    if content > 0.0 {
        return Err(LinearError::NonzeroContent);
    }
    let mut out = state.clone();
    advance_simple_zero_lines(
        &state.q.grid().clone(),
        &mut out.q,
        &mut out.w,
        &mut out.omega2,
        state.beta,
        state.nu,
        dt,
    )?;
    out.q.time += dt;
    out.omega2.time += dt;
    if let Some(wf) = out.w.as_mut() {
        wf.time += dt;
    }
    out.time += dt;
    Ok(out)
}

/// Stable-regime (Q̂, Ŵ) pair at one k≠0 mode advanced from t0 to t1:
///
///   dQ̂/dt = −ν|κ|²Q̂ − iα(l/|κ|)Ŵ,
///   dŴ/dt = −ν|κ|²Ŵ − (k(η−kt)/|κ|²)Ŵ − iα(l/|κ|)Q̂,
///
/// integrated by classical fourth-order steps of size ≤ dt_max after removing
/// the viscous diagonal with the exact integrating factor, so only the
/// bounded coupling terms are resolved numerically.
pub fn evolve_nonzero_mode(
    mode: &ModeIndex,
    qhat: Complex64,
    what: Complex64,
    alpha: f64,
    nu: f64,
    t0: f64,
    t1: f64,
    dt_max: f64,
) -> Result<(Complex64, Complex64)> {
    if mode.k == 0 {
        return Err(LinearError::KZeroMode);
    }
    if !(alpha >= 0.0) {
        return Err(LinearError::BadAlpha(alpha));
    }
    let f = |s: f64, q: Complex64, w: Complex64| {
        let ksq = mode.kappa_norm_sq(s);
        let couple = -Complex64::i() * alpha * mode.l as f64 / ksq.sqrt();
        let shear = -(mode.k as f64) * (mode.eta - mode.k as f64 * s) / ksq;
        (couple * w, couple * q + shear * w)
    };
    lawson_rk4(mode, nu, t0, t1, dt_max, qhat, what, f)
}

/// All-regime (Q̂, Ω̂²) pair at one k≠0 mode:
///
///   dQ̂/dt = −ν|κ|²Q̂ − iβl·Ω̂²,
///   dΩ̂²/dt = −ν|κ|²Ω̂² − i(β−1)(l/|κ|²)Q̂.
///
/// Equivalent to [`evolve_nonzero_mode`] through W = √(β/(β−1))|κ|Ω̂² when
/// β(β−1) > 0, but valid for every β.
pub fn evolve_nonzero_general(
    mode: &ModeIndex,
    qhat: Complex64,
    omega2hat: Complex64,
    beta: f64,
    nu: f64,
    t0: f64,
    t1: f64,
    dt_max: f64,
) -> Result<(Complex64, Complex64)> {
    if mode.k == 0 {
        return Err(LinearError::KZeroMode);
    }
    let lf = mode.l as f64;
    let f = |s: f64, q: Complex64, o: Complex64| {
        let ksq = mode.kappa_norm_sq(s);
        (
            -Complex64::i() * beta * lf * o,
            -Complex64::i() * (beta - 1.0) * (lf / ksq) * q,
        )
    };
    lawson_rk4(mode, nu, t0, t1, dt_max, qhat, omega2hat, f)
}

fn lawson_rk4<F>(
    mode: &ModeIndex,
    nu: f64,
    t0: f64,
    t1: f64,
    dt_max: f64,
    mut a: Complex64,
    mut b: Complex64,
    f: F,
) -> Result<(Complex64, Complex64)>
where
    F: Fn(f64, Complex64, Complex64) -> (Complex64, Complex64),
{
    if !(t1 >= t0) || !(dt_max > 0.0) {
        return Err(LinearError::BadTimeRange);
    }
    if t1 == t0 {
        return Ok((a, b));
    }
    let steps = ((t1 - t0) / dt_max).ceil().max(1.0) as usize;
    let h = (t1 - t0) / steps as f64;
    for step in 0..steps {
        let t = t0 + step as f64 * h;
        let e1 = viscous_integrating_factor(mode, nu, t, t + 0.5 * h);
        let e2 = viscous_integrating_factor(mode, nu, t + 0.5 * h, t + h);
        let e12 = e1 * e2;
        let (k1a, k1b) = f(t, a, b);
        let (k2a, k2b) = f(
            t + 0.5 * h,
            e1 * (a + 0.5 * h * k1a),
            e1 * (b + 0.5 * h * k1b),
        );
        let (k3a, k3b) = f(t + 0.5 * h, e1 * a + 0.5 * h * k2a, e1 * b + 0.5 * h * k2b);
        let (k4a, k4b) = f(t + h, e12 * a + h * e2 * k3a, e12 * b + h * e2 * k3b);
        a = e12 * a + h / 6.0 * (e12 * k1a + 2.0 * e2 * (k2a + k3a) + k4a);
        b = e12 * b + h / 6.0 * (e12 * k1b + 2.0 * e2 * (k2b + k3b) + k4b);
    }
    Ok((a, b))
}

/// Advances a full state (all three mode classes) to time t1. k=0 content
/// moves by the exact closed forms; every k≠0 mode is integrated in the
/// (Q̂, Ω̂²) variables with substeps ≤ dt_max, after which Ŵ is refreshed
/// from Ω̂² in the stable regime.
pub fn evolve_state(state: &LinearState, t1: f64, dt_max: f64) -> Result<LinearState> {
    let dt = t1 - state.time;
    if !(dt >= 0.0) || !(dt_max > 0.0) {
        return Err(LinearError::BadTimeRange);
    }
    let mut out = state.clone();
    let grid = state.q.grid().clone();
    out.ubar0 = evolve_double_zero(&state.ubar0, state.nu, dt);
    advance_simple_zero_lines(
        &grid,
        &mut out.q,
        &mut out.w,
        &mut out.omega2,
        state.beta,
        state.nu,
        dt,
    )?;
    let stable = b_beta(state.beta) > 0.0;
    let ratio = if stable {
        (state.beta / (state.beta - 1.0)).sqrt()
    } else {
        0.0
    };
    for i in 0..grid.nx() {
        if grid.kx(i) == 0 {
            continue;
        }
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                let mode = grid.mode(i, j, m);
                let (qn, on) = evolve_nonzero_general(
                    &mode,
                    state.q.get(0, i, j, m),
                    state.omega2.get(0, i, j, m),
                    state.beta,
                    state.nu,
                    state.time,
                    t1,
                    dt_max,
                )?;
                out.q.set(0, i, j, m, qn);
                out.omega2.set(0, i, j, m, on);
                if let Some(wf) = out.w.as_mut() {
                    wf.set(0, i, j, m, ratio * mode.kappa_norm_sq(t1).sqrt() * on);
                }
            }
        }
    }
    out.time = t1;
    out.q.time = t1;
    out.omega2.time = t1;
    if let Some(wf) = out.w.as_mut() {
        wf.time = t1;
    }
    Ok(out)
}
