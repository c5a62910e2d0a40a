//! Weighted energy bookkeeping: mean-flow, streamwise-independent, and
//! weighted nonzero-mode norms with their running dissipation integrals.

use std::io::Write;
use std::path::Path;

use corioflow_linear::divergence_residual;
use corioflow_multiplier::{a_symbol, m1_symbol, m2_symbol};
use corioflow_spectral::{KahanSum, Transformer};

use crate::run::SimState;
use crate::Result;

pub const CSV_HEADER: &str = "t,E00_1,E00_3,D00_1,D00_3,Es0_Q,Es0_W,Ds0_Q,Ds0_W,\
EA_Q,EA_W,DA_Q,DA_W,G_Q,G_W,sup_u1,sup_u2,sup_u3,div_residual";

/// Instantaneous dissipation integrands paired with the time they were
/// measured, for trapezoid accumulation between records.
#[derive(Debug, Clone, Copy, Default)]
struct Integrands {
    d00: [f64; 2],
    ds0: [f64; 2],
    da: [f64; 2],
    ga: [f64; 2],
}

/// Time series of the bootstrap quantities. Energy columns are squared
/// weighted norms at the record time; D/G columns are their time integrals
/// accumulated by the trapezoid rule over the recorded samples.
#[derive(Debug, Clone, Default)]
pub struct EnergyLedger {
    pub n: usize,
    pub times: Vec<f64>,
    /// ‖Ū₀¹‖², ‖Ū₀³‖² (order-n weight on the mean line)
    pub e00: Vec<[f64; 2]>,
    /// ν∫‖∂_yŪ₀ʲ‖²
    pub d00: Vec<[f64; 2]>,
    /// ‖Q̃₀‖², ‖W̃₀‖² on the k=0, l≠0 lines
    pub es0: Vec<[f64; 2]>,
    /// ν∫‖∇(Q̃₀,W̃₀)‖²
    pub ds0: Vec<[f64; 2]>,
    /// weighted nonzero-mode energies ‖𝒜Q‖², ‖𝒜W‖²
    pub ea: Vec<[f64; 2]>,
    /// ν∫‖∇_L 𝒜(Q,W)‖²
    pub da: Vec<[f64; 2]>,
    /// ghost-rate integrals ∫‖√(−𝓜̇/𝓜) 𝒜(Q,W)‖²
    pub ga: Vec<[f64; 2]>,
    pub sup_u: Vec<[f64; 3]>,
    pub div_residual: Vec<f64>,
    last: Option<(f64, Integrands)>,
}

impl EnergyLedger {
    pub fn new(n: usize) -> Self {
        EnergyLedger {
            n,
            ..Default::default()
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends one record. `tr` must belong to the state's grid.
    pub fn record(&mut self, state: &SimState, tr: &Transformer) -> Result<()> {
        let grid = state.u.grid().clone();
        let de = grid.delta_eta();
        let t = state.time;
        let nu = state.nu;
        let np = self.n as i32;
        let b = state.beta * (state.beta - 1.0);
        let stable = b > 0.0;
        let w_scale = if stable {
            (state.beta / (state.beta - 1.0)).sqrt()
        } else {
            1.0
        };

        let mut e00 = [KahanSum::default(), KahanSum::default()];
        let mut d00 = [KahanSum::default(), KahanSum::default()];
        let mut es0 = [KahanSum::default(), KahanSum::default()];
        let mut ds0 = [KahanSum::default(), KahanSum::default()];
        let mut ea = [KahanSum::default(), KahanSum::default()];
        let mut da = [KahanSum::default(), KahanSum::default()];
        let mut ga = [KahanSum::default(), KahanSum::default()];

        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                for m in 0..grid.nz() {
                    let mode = grid.mode(i, j, m);
                    let wn = mode.bracket_sq().powi(np);
                    if mode.k == 0 && mode.l == 0 {
                        let eta_sq = mode.eta * mode.eta;
                        for (slot, comp) in [(0usize, 0usize), (1, 2)] {
                            let p = state.u.get(comp, i, j, m).norm_sqr() * wn * de;
                            e00[slot].add(p);
                            d00[slot].add(nu * eta_sq * p);
                        }
                        continue;
                    }
                    let ksq_t = mode.kappa_norm_sq(t);
                    let qhat = -ksq_t * state.u.get(1, i, j, m);
                    let ohat = num_complex::Complex64::i()
                        * (mode.l as f64 * state.u.get(0, i, j, m)
                            - mode.k as f64 * state.u.get(2, i, j, m));
                    let what_sq = (w_scale * ksq_t.sqrt()).powi(2) * ohat.norm_sqr();
                    if mode.k == 0 {
                        let nsq = ksq_t; // time-independent on this line
                        let pq = qhat.norm_sqr() * wn * de;
                        let pw = what_sq * wn * de;
                        es0[0].add(pq);
                        es0[1].add(pw);
                        ds0[0].add(nu * nsq * pq);
                        ds0[1].add(nu * nsq * pw);
                    } else {
                        let a = a_symbol(t, &mode, nu, state.delta)?;
                        let (_, dlog_m1) = m1_symbol(t, &mode, nu)?;
                        let (_, dlog_m2) = m2_symbol(t, &mode)?;
                        let ghost = -(dlog_m1 + dlog_m2);
                        let pq = a * a * qhat.norm_sqr() * wn * de;
                        let pw = a * a * what_sq * wn * de;
                        ea[0].add(pq);
                        ea[1].add(pw);
                        da[0].add(nu * ksq_t * pq);
                        da[1].add(nu * ksq_t * pw);
                        ga[0].add(ghost * pq);
                        ga[1].add(ghost * pw);
                    }
                }
            }
        }

        let cur = Integrands {
            d00: [d00[0].value(), d00[1].value()],
            ds0: [ds0[0].value(), ds0[1].value()],
            da: [da[0].value(), da[1].value()],
            ga: [ga[0].value(), ga[1].value()],
        };
        let acc = match (self.last, self.d00.last(), self.ds0.last(), self.da.last(), self.ga.last()) {
            (Some((t_prev, prev)), Some(d00p), Some(ds0p), Some(dap), Some(gap)) => {
                let h = 0.5 * (t - t_prev);
                Integrands {
                    d00: [
                        d00p[0] + h * (prev.d00[0] + cur.d00[0]),
                        d00p[1] + h * (prev.d00[1] + cur.d00[1]),
                    ],
                    ds0: [
                        ds0p[0] + h * (prev.ds0[0] + cur.ds0[0]),
                        ds0p[1] + h * (prev.ds0[1] + cur.ds0[1]),
                    ],
                    da: [
                        dap[0] + h * (prev.da[0] + cur.da[0]),
                        dap[1] + h * (prev.da[1] + cur.da[1]),
                    ],
                    ga: [
                        gap[0] + h * (prev.ga[0] + cur.ga[0]),
                        gap[1] + h * (prev.ga[1] + cur.ga[1]),
                    ],
                }
            }
            _ => Integrands::default(),
        };

        let phys = tr.to_physical(&state.u);
        let npts = grid.len();
        let mut sup = [0.0f64; 3];
        for (c, slot) in sup.iter_mut().enumerate() {
            *slot = phys[c * npts..(c + 1) * npts]
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
        }

        self.times.push(t);
        self.e00.push([e00[0].value(), e00[1].value()]);
        self.d00.push(acc.d00);
        self.es0.push([es0[0].value(), es0[1].value()]);
        self.ds0.push(acc.ds0);
        self.ea.push([ea[0].value(), ea[1].value()]);
        self.da.push(acc.da);
        self.ga.push(acc.ga);
        self.sup_u.push(sup);
        self.div_residual.push(divergence_residual(&state.u, t));
        self.last = Some((t, cur));
        Ok(())
    }

    /// Largest value attained by any bootstrap-controlled column (energies at
    /// any record, dissipation/ghost integrals included).
    pub fn bootstrap_peak(&self) -> f64 {
        let mut peak = 0.0f64;
        for idx in 0..self.len() {
            for pair in [
                self.e00[idx],
                self.d00[idx],
                self.es0[idx],
                self.ds0[idx],
                self.ea[idx],
                self.da[idx],
                self.ga[idx],
            ] {
                peak = peak.max(pair[0]).max(pair[1]);
            }
        }
        peak
    }

    /// True if the latest record contains only finite values.
    pub fn last_finite(&self) -> bool {
        let Some(idx) = self.len().checked_sub(1) else {
            return true;
        };
        let pairs = [
            self.e00[idx],
            self.d00[idx],
            self.es0[idx],
            self.ds0[idx],
            self.ea[idx],
            self.da[idx],
            self.ga[idx],
        ];
        pairs.iter().all(|p| p[0].is_finite() && p[1].is_finite())
            && self.sup_u[idx].iter().all(|v| v.is_finite())
            && self.div_residual[idx].is_finite()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "{CSV_HEADER}")?;
        for idx in 0..self.len() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                self.times[idx],
                self.e00[idx][0],
                self.e00[idx][1],
                self.d00[idx][0],
                self.d00[idx][1],
                self.es0[idx][0],
                self.es0[idx][1],
                self.ds0[idx][0],
                self.ds0[idx][1],
                self.ea[idx][0],
                self.ea[idx][1],
                self.da[idx][0],
                self.da[idx][1],
                self.ga[idx][0],
                self.ga[idx][1],
                self.sup_u[idx][0],
                self.sup_u[idx][1],
                self.sup_u[idx][2],
                self.div_residual[idx],
            )?;
        }
        out.flush()?;
        Ok(())
    }
}
