//! Fourth-order field stepping: classical RK4 on the projected non-viscous
//! terms, composed with the exact per-mode viscous integrating factor so the
//! stiff diffusion never limits the step.

use num_complex::Complex64;

use corioflow_linear::viscous_integrating_factor;
use corioflow_spectral::{SpectralField, Transformer};

use crate::rhs::{Dynamics, RhsComputer};
use crate::run::SimState;
use crate::Result;

pub struct Stepper {
    rhs: RhsComputer,
    nu: f64,
    dynamics: Dynamics,
}

/// field *= per-mode exp(−ν∫_a^b |κ|²), retagging the field's clock to b.
fn apply_if(field: &mut SpectralField, nu: f64, a: f64, b: f64) {
    let grid = field.grid().clone();
    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                let e = viscous_integrating_factor(&grid.mode(i, j, m), nu, a, b);
                for c in 0..field.components() {
                    let v = field.get(c, i, j, m) * e;
                    field.set(c, i, j, m, v);
                }
            }
        }
    }
    field.time = b;
}

/// Plain Leray projection for the wavevector at time t (drops any numerical
/// drift off the constraint manifold after a step).
fn project_div_free(field: &mut SpectralField, t: f64) {
    let grid = field.grid().clone();
    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            for m in 0..grid.nz() {
                let kappa = grid.mode(i, j, m).kappa(t);
                let ksq = kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2];
                if ksq == 0.0 {
                    continue;
                }
                let dot = kappa[0] * field.get(0, i, j, m)
                    + kappa[1] * field.get(1, i, j, m)
                    + kappa[2] * field.get(2, i, j, m);
                for c in 0..3 {
                    let v = field.get(c, i, j, m) - kappa[c] * dot / ksq;
                    field.set(c, i, j, m, v);
                }
            }
        }
    }
}

impl Stepper {
    pub fn new(state_grid: &corioflow_spectral::Grid, beta: f64, nu: f64) -> Self {
        Self::with_dynamics(state_grid, beta, nu, Dynamics::Full)
    }

    pub fn with_dynamics(
        state_grid: &corioflow_spectral::Grid,
        beta: f64,
        nu: f64,
        dynamics: Dynamics,
    ) -> Self {
        Stepper {
            rhs: RhsComputer::new(state_grid, beta),
            nu,
            dynamics,
        }
    }

    pub fn transformer(&self) -> &Transformer {
        self.rhs.transformer()
    }

    /// Advances by dt. Non-finite values are the caller's concern (blow-up is
    /// a status, not an error); genuine assembly failures return Err.
    pub fn step(&self, state: &SimState, dt: f64) -> Result<SimState> {
        let nu = self.nu;
        let t0 = state.time;
        let t1 = t0 + dt;
        let tm = t0 + 0.5 * dt;
        let u0 = &state.u;

        let k1 = self.rhs.compute(u0, t0, self.dynamics)?;

        // stage 2: E1(u0 + dt/2 k1) at tm
        let mut s2 = u0.clone();
        s2.axpy(Complex64::new(0.5 * dt, 0.0), &k1)?;
        apply_if(&mut s2, nu, t0, tm);
        let k2 = self.rhs.compute(&s2, tm, self.dynamics)?;

        // stage 3: E1 u0 + dt/2 k2 at tm
        let mut e1u = u0.clone();
        apply_if(&mut e1u, nu, t0, tm);
        let mut s3 = e1u.clone();
        s3.axpy(Complex64::new(0.5 * dt, 0.0), &k2)?;
        let k3 = self.rhs.compute(&s3, tm, self.dynamics)?;

        // stage 4: E12 u0 + dt E2 k3 at t1
        let mut e2k3 = k3;
        apply_if(&mut e2k3, nu, tm, t1);
        let mut s4 = e1u;
        apply_if(&mut s4, nu, tm, t1); // now E12 u0
        let mut u1 = s4.clone();
        s4.axpy(Complex64::new(dt, 0.0), &e2k3)?;
        let k4 = self.rhs.compute(&s4, t1, self.dynamics)?;

        // combine: u1 = E12 u0 + dt/6 (E12 k1 + 2 E2 k2 + 2 E2 k3 + k4)
        let mut e12k1 = k1;
        apply_if(&mut e12k1, nu, t0, t1);
        let mut e2k2 = k2;
        apply_if(&mut e2k2, nu, tm, t1);
        let w = dt / 6.0;
        u1.axpy(Complex64::new(w, 0.0), &e12k1)?;
        u1.axpy(Complex64::new(2.0 * w, 0.0), &e2k2)?;
        u1.axpy(Complex64::new(2.0 * w, 0.0), &e2k3)?;
        u1.axpy(Complex64::new(w, 0.0), &k4)?;

        project_div_free(&mut u1, t1);
        u1.enforce_conjugate_symmetry();
        u1.apply_dealias_mask();
        u1.time = t1;

        Ok(SimState {
            u: u1,
            beta: state.beta,
            nu: state.nu,
            delta: state.delta,
            time: t1,
            step_count: state.step_count + 1,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::init::seeded_field;
    use corioflow_linear::{divergence_residual, evolve_nonzero_general};
    use corioflow_spectral::{Frame, Grid};

    fn grid() -> Grid {
        Grid::new(8, 16, 8, 8.0 * std::f64::consts::PI).unwrap()
    }

    fn state_from(u: SpectralField, beta: f64, nu: f64) -> SimState {
        let time = u.time;
        SimState {
            u,
            beta,
            nu,
            delta: 0.01,
            time,
            step_count: 0,
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let g = grid();
        let st = state_from(SpectralField::zeros(g.clone(), 3, Frame::Moving, 0.0), 2.0, 0.01);
        let stepper = Stepper::new(&g, 2.0, 0.01);
        let next = stepper.step(&st, 0.05).unwrap();
        assert!(next.u.coeffs().iter().all(|v| v.norm() == 0.0));
        assert_eq!(next.step_count, 1);
    }

    #[test]
    fn invariants_preserved_on_random_data() {
        let g = grid();
        let mut st = state_from(seeded_field(&g, 0.05, 21, 4), 2.0, 5e-3);
        let stepper = Stepper::new(&g, 2.0, 5e-3);
        let mean0 = [st.u.get_mode(0, 0, 0, 0), st.u.get_mode(2, 0, 0, 0)];
        for _ in 0..20 {
            st = stepper.step(&st, 0.02).unwrap();
        }
        assert!(divergence_residual(&st.u, st.time) < 1e-12);
        assert!(st.u.max_conjugate_asymmetry() < 1e-14);
        // second component of the mean line identically zero
        for j in 0..g.ny() {
            assert!(st.u.get(1, 0, j, 0).norm() < 1e-14);
        }
        // total x/z momentum conserved
        assert!((st.u.get_mode(0, 0, 0, 0) - mean0[0]).norm() < 1e-12);
        assert!((st.u.get_mode(2, 0, 0, 0) - mean0[1]).norm() < 1e-12);
    }

    #[test]
    fn linearized_step_matches_per_mode_oracle() {
        let g = grid();
        let beta = 2.0;
        let nu = 1e-2;
        let mut st = state_from(seeded_field(&g, 1.0, 8, 4), beta, nu);
        let u0 = st.u.clone();
        let stepper = Stepper::with_dynamics(&g, beta, nu, Dynamics::Linearized);
        let t_end = 2.0f64;
        let dt = 0.01f64;
        let steps = (t_end / dt).round() as usize;
        for _ in 0..steps {
            st = stepper.step(&st, dt).unwrap();
        }
        // Per-mode oracle in the vorticity-style variables for every k≠0 mode.
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                for m in 0..g.nz() {
                    let mode = g.mode(i, j, m);
                    if mode.k == 0 || !g.in_dealias_ball(mode.k, g.eta_int(j), mode.l) {
                        continue;
                    }
                    let q0 = -mode.kappa_norm_sq(0.0) * u0.get(1, i, j, m);
                    let o0 = Complex64::i()
                        * (mode.l as f64 * u0.get(0, i, j, m)
                            - mode.k as f64 * u0.get(2, i, j, m));
                    let (q1, o1) =
                        evolve_nonzero_general(&mode, q0, o0, beta, nu, 0.0, t_end, 2e-3)
                            .unwrap();
                    let q_num = -mode.kappa_norm_sq(t_end) * st.u.get(1, i, j, m);
                    let o_num = Complex64::i()
                        * (mode.l as f64 * st.u.get(0, i, j, m)
                            - mode.k as f64 * st.u.get(2, i, j, m));
                    worst = worst.max((q_num - q1).norm().max((o_num - o1).norm()));
                    scale = scale.max(q1.norm().max(o1.norm()));
                }
            }
        }
        assert!(
            worst / scale < 1e-6,
            "linearized stepper deviates from mode oracle by {:.3e}",
            worst / scale
        );
    }

    #[test]
    fn fourth_order_self_convergence() {
        let g = grid();
        let st = state_from(seeded_field(&g, 0.2, 13, 4), 0.5, 1e-2);
        let stepper = Stepper::new(&g, 0.5, 1e-2);
        let advance = |mut s: SimState, dt: f64, steps: usize| -> SimState {
            for _ in 0..steps {
                s = stepper.step(&s, dt).unwrap();
            }
            s
        };
        let t_end = 0.8;
        let reference = advance(st.clone(), t_end / 64.0, 64);
        let err = |dt_steps: usize| -> f64 {
            let s = advance(st.clone(), t_end / dt_steps as f64, dt_steps);
            let mut d = s.u;
            d.time = reference.u.time;
            d.axpy(Complex64::new(-1.0, 0.0), &reference.u).unwrap();
            d.l2_norm_sq().sqrt()
        };
        let e_coarse = err(4);
        let e_fine = err(8);
        let order = (e_coarse / e_fine).log2();
        assert!(
            (3.5..=4.8).contains(&order),
            "observed order {order} (errors {e_coarse:.3e} / {e_fine:.3e})"
        );
    }
}
