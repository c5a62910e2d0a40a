//! The eleven acceptance checks. Each function runs one numbered criterion
//! end to end against the library crates and reports pass/fail with the
//! measured quantities, catching errors as failed outcomes rather than
//! panicking.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use corioflow_linear::{
    dispersive_decay_experiment, evolve_nonzero_mode, evolve_simple_zero, reconstruct_velocity,
    velocity_to_unknowns,
};
use corioflow_multiplier::reference::{m1_reference, m2_reference, m_reference};
use corioflow_multiplier::{check_m_bounds, m1_symbol, m2_symbol, m_symbol, sample};
use corioflow_nonlinear::{
    is_settled, run, run_with, threshold_scan, Dynamics, EnergyLedger, RunStatus, SimConfig,
    SimState, Stepper,
};
use corioflow_regimes::{b_beta, classify, growth_rate, instability_sets, RegimeKind};
use corioflow_spectral::{Frame, Grid, ModeIndex, SpectralField};

use crate::acceptance::{Corruption, CriterionOutcome};
use crate::fit::{fit_exp_rate, fit_power_law};
use crate::Result;

/// Default sample count for the randomized multiplier sweeps (criteria 3, 4).
pub const DEFAULT_SWEEP: usize = 10_000;

// Regression baselines frozen from the first recorded run of the suite on the
// pinned seeds. These detect behavioural drift, not correctness; correctness
// is the accompanying explicit bounds.
const M_BOUND_C_LOW_BASELINE: f64 = 1000.905547689;
const M_BOUND_C_PROD_BASELINE: f64 = 1.116745110391;
const SCAN_EPS_BASELINE: [[f64; 2]; 2] = [
    [3.764786126102197, 2.6640795277698404],
    [11.92295916866911, 9.467935861134837],
];
const SCAN_EXPONENT_BASELINE: [f64; 2] = [0.28724274134813454, 0.19149516089876129];
const BASELINE_REL_TOL: f64 = 1e-6;

fn finish(id: usize, name: &'static str, body: Result<(bool, String)>) -> CriterionOutcome {
    match body {
        Ok((passed, details)) => CriterionOutcome {
            id,
            name,
            passed,
            details,
        },
        Err(e) => CriterionOutcome {
            id,
            name,
            passed: false,
            details: format!("error: {e}"),
        },
    }
}

fn rel_err(value: f64, reference: f64) -> f64 {
    (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

fn near_baseline(value: f64, baseline: f64) -> bool {
    (value - baseline).abs() <= baseline.abs() * BASELINE_REL_TOL
}

fn nonzero_k(rng: &mut ChaCha8Rng, max: i64) -> i64 {
    loop {
        let k = rng.gen_range(-max..=max);
        if k != 0 {
            return k;
        }
    }
}

fn unit_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    let phase = rng.gen::<f64>() * std::f64::consts::TAU;
    Complex64::new(phase.cos(), phase.sin())
}

/// 1: the four-way classification on the canonical β list, plus B_β ≥ −1/4
/// with equality exactly at β = 1/2.
pub fn regime_trichotomy() -> CriterionOutcome {
    finish(1, "regime-trichotomy", (|| {
        use RegimeKind::*;
        let cases = [
            (-2.0, Stable),
            (-1.0, Stable),
            (0.0, LiftUpClassical),
            (0.1, ExponentiallyUnstable),
            (0.5, ExponentiallyUnstable),
            (0.9, ExponentiallyUnstable),
            (1.0, LiftUpRotated),
            (1.5, Stable),
            (2.0, Stable),
            (10.0, Stable),
        ];
        let mut matched = 0usize;
        let mut mismatch = String::new();
        for &(beta, expect) in &cases {
            let report = classify(beta, 1e-3)?;
            if report.kind == expect {
                matched += 1;
            } else if mismatch.is_empty() {
                mismatch = format!("; beta={beta} gave {}", report.kind);
            }
        }

        let mut min_b = f64::INFINITY;
        let mut argmin = f64::NAN;
        let mut floor_ok = true;
        for i in 0..=4000 {
            let beta = -10.0 + 20.0 * i as f64 / 4000.0;
            let b = b_beta(beta);
            floor_ok &= b >= -0.25;
            if b < min_b {
                min_b = b;
                argmin = beta;
            }
            if b == -0.25 && beta != 0.5 {
                floor_ok = false;
            }
        }
        let passed = matched == cases.len() && floor_ok && min_b == -0.25 && argmin == 0.5;
        Ok((
            passed,
            format!(
                "{matched}/{} betas classified as expected{mismatch}; min B_beta={min_b} at beta={argmin}",
                cases.len()
            ),
        ))
    })())
}

/// 2: growth rate 0.496 at (β=1/2, ν=10⁻³, η=0, l=2) and a sign change on
/// η ∈ [0, 30].
pub fn growth_rate_curve() -> CriterionOutcome {
    finish(2, "growth-rate-curve", (|| {
        let at_zero = growth_rate(0.5, 1e-3, 0.0, 2)?;
        let value_ok = (at_zero - 0.496).abs() <= 1e-12;
        let mut crossing = None;
        let mut prev = at_zero;
        for i in 1..=300 {
            let eta = 0.1 * i as f64;
            let rate = growth_rate(0.5, 1e-3, eta, 2)?;
            if prev > 0.0 && rate <= 0.0 {
                crossing = Some(eta);
                break;
            }
            prev = rate;
        }
        let passed = value_ok && at_zero > 0.0 && crossing.is_some();
        Ok((
            passed,
            format!(
                "rate(eta=0)={at_zero:.15} (target 0.496 +/- 1e-12), sign change near eta={}",
                crossing.map_or("none".into(), |e| format!("{e:.1}"))
            ),
        ))
    })())
}

/// 3: closed-form m, M₁, M₂ agree with independent quadrature of their
/// defining rate equations to 1e−8 relative over a randomized sweep, with the
/// range bounds e^{−π} ≤ M₁, M₂ ≤ 1, 0 < m ≤ 1, and m non-increasing.
pub fn multiplier_closed_forms(n_samples: usize, corruption: Corruption) -> CriterionOutcome {
    finish(3, "multiplier-closed-forms", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC3);
        let e_pi = (-std::f64::consts::PI).exp();
        let mut max_rel = [0.0f64; 3];
        let mut bounds_ok = true;
        let mut mono_ok = true;
        for _ in 0..n_samples {
            let nu: f64 = if rng.gen_bool(0.5) { 1e-3 } else { 1e-4 };
            let k = nonzero_k(&mut rng, 8);
            let l = rng.gen_range(-8i64..=8);
            let eta = rng.gen_range(-64.0..64.0);
            let t = rng.gen_range(0.0..2e3 * nu.powf(-1.0 / 3.0));
            let mode = ModeIndex::new(k, eta, l);

            let (m_true, _) = m_symbol(t, &mode, nu)?;
            let m = match corruption {
                Corruption::None => m_true,
                Corruption::MClosedForm => m_true * (1.0 + 5e-7),
            };
            let (m1, _) = m1_symbol(t, &mode, nu)?;
            let (m2, _) = m2_symbol(t, &mode)?;
            max_rel[0] = max_rel[0].max(rel_err(m, m_reference(t, &mode, nu)?));
            max_rel[1] = max_rel[1].max(rel_err(m1, m1_reference(t, &mode, nu)?));
            max_rel[2] = max_rel[2].max(rel_err(m2, m2_reference(t, &mode)?));

            bounds_ok &= (e_pi - 1e-12..=1.0 + 1e-12).contains(&m1)
                && (e_pi - 1e-12..=1.0 + 1e-12).contains(&m2)
                && m_true > 0.0
                && m_true <= 1.0 + 1e-12;
            let (m_half, _) = m_symbol(0.5 * t, &mode, nu)?;
            mono_ok &= m_true <= m_half * (1.0 + 1e-12);
        }
        let tol_ok = max_rel.iter().all(|&e| e < 1e-8);
        Ok((
            tol_ok && bounds_ok && mono_ok,
            format!(
                "max rel err vs quadrature: m={:.2e} M1={:.2e} M2={:.2e} ({} samples, tol 1e-8); \
                 range bounds {}, monotone {}",
                max_rel[0],
                max_rel[1],
                max_rel[2],
                n_samples,
                if bounds_ok { "ok" } else { "VIOLATED" },
                if mono_ok { "ok" } else { "VIOLATED" },
            ),
        ))
    })())
}

/// 4: the uniform lower bound and two-point product estimate for m hold with
/// constants well under 10⁴ on a structured sweep; the observed constants are
/// pinned as regression baselines.
pub fn m_bound_constants() -> CriterionOutcome {
    finish(4, "m-bound-constants", (|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC4);
        let mut samples = Vec::with_capacity(DEFAULT_SWEEP);
        for &nu in &[1e-3f64, 1e-4] {
            for _ in 0..25 {
                // Samples sharing (t, k, nu) form the pairs of the product
                // estimate; (eta, l) vary within the group.
                let k = nonzero_k(&mut rng, 8);
                let t = rng.gen_range(0.0..2e3 * nu.powf(-1.0 / 3.0));
                for _ in 0..(DEFAULT_SWEEP / 50) {
                    let eta = rng.gen_range(-64.0..64.0);
                    let l = rng.gen_range(-8i64..=8);
                    samples.push(sample(t, ModeIndex::new(k, eta, l), nu, 0.01)?);
                }
            }
        }
        let report = check_m_bounds(&samples);
        let finite_ok = !report.violation
            && report.c_low <= 1e4
            && report.c_prod <= 1e4
            && report.c_low.is_finite()
            && report.c_prod.is_finite();
        let baseline_ok = near_baseline(report.c_low, M_BOUND_C_LOW_BASELINE)
            && near_baseline(report.c_prod, M_BOUND_C_PROD_BASELINE);
        Ok((
            finite_ok && baseline_ok,
            format!(
                "C_low={:.12e} C_prod={:.12e} over {} samples / {} pairs (limit 1e4); \
                 baselines {}",
                report.c_low,
                report.c_prod,
                report.n_samples,
                report.n_pairs,
                if baseline_ok { "matched" } else { "DRIFTED" },
            ),
        ))
    })())
}

/// 5: for random k≠0 modes the m-weighted energy of the stable-regime pair is
/// non-increasing and sits below the e^{−νk²t³/12} envelope up to 2ν^{−1/3}.
pub fn enhanced_dissipation_envelope() -> CriterionOutcome {
    finish(5, "enhanced-dissipation-envelope", (|| {
        let nu = 1e-3f64;
        let alpha = 2f64.sqrt();
        let t_max = 2.0 * nu.powf(-1.0 / 3.0);
        let n_out = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(0xC5);
        let mut worst_mono = 0.0f64;
        let mut worst_env = 0.0f64;
        for _ in 0..100 {
            let k = (1 + rng.gen_range(0..2i64)) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let l = rng.gen_range(-8i64..=8);
            let eta = rng.gen_range(-64.0..64.0);
            let mode = ModeIndex::new(k, eta, l);
            let raw_q = unit_complex(&mut rng) * rng.gen::<f64>();
            let raw_w = unit_complex(&mut rng) * rng.gen::<f64>();
            let nrm = (raw_q.norm_sqr() + raw_w.norm_sqr()).sqrt().max(1e-300);
            let (mut q, mut w) = (raw_q / nrm, raw_w / nrm);
            let mut t = 0.0f64;
            let mut e_prev = 1.0f64; // m(0) = 1 and |q|^2+|w|^2 normalized
            for step in 1..=n_out {
                let t1 = t_max * step as f64 / n_out as f64;
                let (q1, w1) = evolve_nonzero_mode(&mode, q, w, alpha, nu, t, t1, 0.05)?;
                let (m, _) = m_symbol(t1, &mode, nu)?;
                let e = m * m * (q1.norm_sqr() + w1.norm_sqr());
                worst_mono = worst_mono.max(e / e_prev);
                let envelope = (-nu * (k * k) as f64 * t1.powi(3) / 12.0).exp();
                worst_env = worst_env.max(e / envelope);
                (q, w, t, e_prev) = (q1, w1, t1, e);
            }
        }
        let passed = worst_mono <= 1.0 + 1e-9 && worst_env <= 1.0 + 1e-6;
        Ok((
            passed,
            format!(
                "100 modes to t={t_max}: max step energy ratio {worst_mono:.12} \
                 (limit 1+1e-9), max energy/envelope {worst_env:.12} (limit 1+1e-6)"
            ),
        ))
    })())
}

/// 6: per-mode wall-normal velocity obeys |Û²(t)|·⟨t⟩ ≤ 8⟨κ(0)⟩²|Û(0)| along
/// stable-regime trajectories up to 2ν^{−1/3}.
pub fn inviscid_damping_bound() -> CriterionOutcome {
    finish(6, "inviscid-damping-bound", (|| {
        let nu = 1e-3f64;
        let beta = 2.0;
        let alpha = b_beta(beta).sqrt();
        let w_scale = (beta / (beta - 1.0)).sqrt();
        let t_max = 2.0 * nu.powf(-1.0 / 3.0);
        let n_out = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(0xC6);
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let k = (1 + rng.gen_range(0..2i64)) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let l = rng.gen_range(-8i64..=8);
            let eta = rng.gen_range(-64.0..64.0);
            let mode = ModeIndex::new(k, eta, l);
            let q0 = unit_complex(&mut rng) * (0.1 + rng.gen::<f64>());
            let w0 = unit_complex(&mut rng) * (0.1 + rng.gen::<f64>());

            let ksq0 = mode.kappa_norm_sq(0.0);
            let kperp_sq = (k * k + l * l) as f64;
            let omega0_sq = w0.norm_sqr() / (w_scale * w_scale * ksq0);
            let u2_sq = q0.norm_sqr() / (ksq0 * ksq0);
            let kappa2_0 = mode.kappa(0.0)[1];
            let u13_sq = (omega0_sq + kappa2_0 * kappa2_0 * u2_sq) / kperp_sq;
            let u_init = (u2_sq + u13_sq).sqrt();
            let bound = 8.0 * (1.0 + ksq0) * u_init;

            let (mut q, mut w) = (q0, w0);
            let mut t = 0.0f64;
            for step in 1..=n_out {
                let t1 = t_max * step as f64 / n_out as f64;
                let (q1, w1) = evolve_nonzero_mode(&mode, q, w, alpha, nu, t, t1, 0.05)?;
                let u2 = q1.norm() / mode.kappa_norm_sq(t1);
                let weighted = u2 * (1.0 + t1 * t1).sqrt();
                worst = worst.max(weighted / bound);
                (q, w, t) = (q1, w1, t1);
            }
        }
        Ok((
            worst <= 1.0,
            format!(
                "100 modes to t={t_max}: max <t>-weighted |u2| at {:.3} of the \
                 8<kappa(0)>^2 |u(0)| budget",
                worst
            ),
        ))
    })())
}

/// Divergence-free Gaussian wave packets on the k=0 lines at the first three
/// transverse wavenumbers — shared by the decay criterion and the CLI.
pub fn gaussian_packet(grid: &Grid) -> SpectralField {
    let mut u = SpectralField::zeros(grid.clone(), 3, Frame::Moving, 0.0);
    // Non-collinear coefficients so every transverse wavenumber participates.
    // Amplitudes fall steeply with l: a packet on line l reaches its power-law
    // stage only once the degenerate phase point (at η = l/√2, weighted by
    // e^{−l²/2} here) outgrows the bulk contribution, which for l ≥ 2 happens
    // well past t = 10³; until then those lines decay faster than the l = 1
    // asymptotic and would otherwise dominate the early sup norm.
    let coeffs = [
        (Complex64::new(0.8, 0.3), Complex64::new(0.5, -0.6)),
        (Complex64::new(-0.2, 0.7), Complex64::new(0.9, 0.1)),
        (Complex64::new(0.4, -0.4), Complex64::new(-0.3, 0.8)),
    ];
    let scales = [1.0, 0.1, 0.02];
    for j in 0..grid.ny() {
        let eta = grid.eta(j);
        let g = (-eta * eta).exp();
        if g < 1e-300 {
            continue;
        }
        for (slot, l) in [1i64, 2, 3].into_iter().enumerate() {
            let n = (eta * eta + (l * l) as f64).sqrt();
            let (c1, c2) = (coeffs[slot].0 * scales[slot], coeffs[slot].1 * scales[slot]);
            let ei = grid.eta_int(j);
            u.set_mode(0, 0, ei, l, c1 * g);
            u.set_mode(1, 0, ei, l, c2 * g * l as f64 / n);
            u.set_mode(2, 0, ei, l, -c2 * g * eta / n);
        }
    }
    u.enforce_conjugate_symmetry();
    u
}

fn dispersive_exponent(ny: usize, ly_factor: f64, times: &[f64], nu: f64) -> Result<f64> {
    let grid = Grid::new(4, ny, 16, std::f64::consts::TAU * ly_factor)?;
    let u = gaussian_packet(&grid);
    let series = dispersive_decay_experiment(&u, 2.0, nu, times)?;
    let compensated: Vec<(f64, f64)> = times
        .iter()
        .zip(&series.sup_u)
        .map(|(&t, sup)| (t, sup.iter().fold(0.0f64, |a, &b| a.max(b)) * (nu * t).exp()))
        .collect();
    Ok(fit_power_law(&compensated, (9.9, 1000.1))?.exponent)
}

/// 7: Gaussian wave packets on the k=0 lines disperse with sup-norm exponent
/// −1/3 (after compensating the bare heat factor), stable under doubling of
/// the y-period.
pub fn dispersive_decay_fit() -> CriterionOutcome {
    finish(7, "dispersive-decay-fit", (|| {
        let nu = 1e-4;
        let times: Vec<f64> = (0..30).map(|i| 10.0 * 100f64.powf(i as f64 / 29.0)).collect();
        let exp_a = dispersive_exponent(8192, 1024.0, &times, nu)?;
        let exp_b = dispersive_exponent(16384, 2048.0, &times, nu)?;
        let target_ok = (exp_a + 1.0 / 3.0).abs() < 0.05;
        let doubling_ok = (exp_a - exp_b).abs() < 0.01;
        Ok((
            target_ok && doubling_ok,
            format!(
                "fitted exponent {exp_a:.4} (target -1/3 +/- 0.05), \
                 after y-period doubling {exp_b:.4} (shift {:.1e}, limit 0.01)",
                (exp_a - exp_b).abs()
            ),
        ))
    })())
}

/// 8: data supported on the core unstable set grows at a fitted rate between
/// the set's defining threshold and the best member rate.
pub fn instability_growth_rate() -> CriterionOutcome {
    finish(8, "instability-growth-rate", (|| {
        let (beta, nu) = (0.5, 1e-3);
        let grid = Grid::new(4, 64, 16, 32.0 * std::f64::consts::PI)?;
        let etas: Vec<f64> = (0..grid.ny()).map(|j| grid.eta(j)).collect();
        let sets = instability_sets(beta, nu, &etas, 3)?;
        let mut u = SpectralField::zeros(grid.clone(), 3, Frame::Moving, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
        let mut max_rate = 0.0f64;
        for mode in &sets.s_prime_members {
            let ei = (mode.eta / grid.delta_eta()).round() as i64;
            let n = (mode.eta * mode.eta + (mode.l * mode.l) as f64).sqrt();
            let c1 = unit_complex(&mut rng);
            let c2 = unit_complex(&mut rng);
            u.set_mode(0, 0, ei, mode.l, c1);
            u.set_mode(1, 0, ei, mode.l, c2 * mode.l as f64 / n);
            u.set_mode(2, 0, ei, mode.l, -c2 * mode.eta / n);
            max_rate = max_rate.max(growth_rate(beta, nu, mode.eta, mode.l)?);
        }
        u.enforce_conjugate_symmetry();

        let mut state = velocity_to_unknowns(&u, beta, nu, 0.0)?;
        let mut series = Vec::new();
        series.push((0.0, reconstruct_velocity(&state)?.l2_norm_sq().sqrt()));
        for _ in 0..48 {
            state = evolve_simple_zero(&state, 0.5)?;
            series.push((state.time, reconstruct_velocity(&state)?.l2_norm_sq().sqrt()));
        }
        let fitted = fit_exp_rate(&series, (7.9, 24.1))?.exponent;
        let lower = 0.5 * ((-b_beta(beta)).sqrt() - nu);
        let upper = max_rate * 1.02;
        Ok((
            fitted >= lower && fitted <= upper,
            format!(
                "{} core modes: fitted rate {fitted:.6} inside [{lower:.6}, {upper:.6}] \
                 (threshold, best member rate {max_rate:.6} + 2%)",
                sets.s_prime_members.len()
            ),
        ))
    })())
}

/// 9: full minus linearized trajectories deviate at O(ε): tenfold amplitude
/// gives a deviation ratio of 10 ± 3, with the divergence constraint held at
/// every record.
pub fn linearization_deviation() -> CriterionOutcome {
    finish(9, "linearization-deviation-scaling", (|| {
        let mut cfg = SimConfig::default();
        cfg.output.dir = None;
        let mut devs = Vec::new();
        let mut div_max = 0.0f64;
        let mut all_completed = true;
        for &eps in &[1e-6, 1e-5] {
            cfg.init.epsilon = eps;
            let full = run_with(&cfg, Dynamics::Full)?;
            let lin = run_with(&cfg, Dynamics::Linearized)?;
            all_completed &= full.status == RunStatus::Completed
                && lin.status == RunStatus::Completed;
            for ledger in [&full.ledger, &lin.ledger] {
                div_max = ledger
                    .div_residual
                    .iter()
                    .fold(div_max, |a, &b| a.max(b));
            }
            let mut diff = full.state.u.clone();
            diff.axpy(Complex64::new(-1.0, 0.0), &lin.state.u)?;
            devs.push(diff.l2_norm_sq().sqrt() / lin.state.u.l2_norm_sq().sqrt());
        }
        let ratio = devs[1] / devs[0];
        let passed = all_completed && (7.0..=13.0).contains(&ratio) && div_max < 1e-10;
        Ok((
            passed,
            format!(
                "relative deviation {:.3e} at eps=1e-6, {:.3e} at 1e-5; ratio {ratio:.2} \
                 (target 10 +/- 3); max divergence residual {div_max:.2e} (limit 1e-10)",
                devs[0], devs[1]
            ),
        ))
    })())
}

/// 10: a small-amplitude stable-regime run keeps every ledger column under
/// the certified 100ε² envelope, and for pure mean-line data the ledger's
/// energy and dissipation columns close the heat balance to 1e−8.
pub fn bootstrap_and_heat_identity() -> CriterionOutcome {
    finish(10, "bootstrap-ledger-and-heat-identity", (|| {
        let mut cfg = SimConfig::default();
        cfg.init.epsilon = 1e-3;
        let result = run(&cfg)?;
        let peak = result.ledger.bootstrap_peak();
        let budget = 100.0 * cfg.init.epsilon * cfg.init.epsilon;
        let settled = result.status == RunStatus::Completed
            && is_settled(&result, cfg.init.epsilon)
            && peak <= budget;

        // Pure mean-line data: the step is exactly heat flow there, so the
        // only error in E(t) + 2D(t) = E(0) is the ledger's trapezoid rule.
        // The volume mean (η = 0) is excluded: with no pressure constraint at
        // the zero wavevector its momentum rotates under the Coriolis coupling
        // instead of diffusing, which is outside the heat balance.
        let grid = Grid::with_dealias(8, 64, 8, 32.0 * std::f64::consts::PI, 2.0 / 3.0)?;
        let mut u = SpectralField::zeros(grid.clone(), 3, Frame::Moving, 0.0);
        for j in 0..grid.ny() {
            let ei = grid.eta_int(j);
            if ei == 0 || !grid.in_dealias_ball(0, ei, 0) {
                continue;
            }
            let eta = grid.eta(j);
            u.set_mode(0, 0, ei, 0, Complex64::new((-eta * eta).exp(), 0.0));
            u.set_mode(2, 0, ei, 0, Complex64::new(0.5 * (-0.5 * eta * eta).exp(), 0.0));
        }
        u.enforce_conjugate_symmetry();
        let mut state = SimState {
            u,
            beta: 2.0,
            nu: 1e-2,
            delta: 0.01,
            time: 0.0,
            step_count: 0,
        };
        let stepper = Stepper::new(&grid, state.beta, state.nu);
        let mut ledger = EnergyLedger::new(4);
        ledger.record(&state, stepper.transformer())?;
        for _ in 0..400 {
            state = stepper.step(&state, 0.005)?;
            ledger.record(&state, stepper.transformer())?;
        }
        let mut heat_err = 0.0f64;
        for idx in 0..ledger.len() {
            for c in 0..2 {
                let closure = ledger.e00[idx][c] + 2.0 * ledger.d00[idx][c];
                heat_err = heat_err.max((closure - ledger.e00[0][c]).abs() / ledger.e00[0][c]);
            }
        }
        let heat_ok = heat_err <= 1e-8;
        Ok((
            settled && heat_ok,
            format!(
                "bootstrap peak {peak:.3e} vs budget {budget:.1e} ({}); \
                 mean-line heat-balance defect {heat_err:.2e} (limit 1e-8)",
                result.status
            ),
        ))
    })())
}

/// 11: the amplitude-threshold scan brackets a transition for every (β, ν)
/// pair; critical amplitudes and slopes are pinned as regression baselines
/// and the β-monotonicity of the threshold is reported.
pub fn threshold_scan_baselines() -> CriterionOutcome {
    finish(11, "threshold-scan-baselines", (|| {
        let mut base = SimConfig::default();
        base.time.dt = 0.02;
        base.time.t_end = 8.0;
        base.time.ledger_interval = 0.2;
        base.output.dir = None;
        let nu_list = [1e-2, 3e-3];
        // Bracket straddling the measured transition amplitudes (≈3–9 across
        // these (β, ν) pairs); 5 geometric bisections pin ε_c to ±6%.
        let eps_bounds = (1.0, 40.0);

        let mut details = String::new();
        let mut passed = true;
        let mut crit: Vec<Vec<f64>> = Vec::new();
        for (bi, &beta) in [2.0, 8.0].iter().enumerate() {
            base.physics.beta = beta;
            let table = threshold_scan(&base, &nu_list, eps_bounds, 5, Dynamics::Full)?;
            let mut row_vals = Vec::new();
            for (ri, row) in table.rows.iter().enumerate() {
                match row.eps_critical {
                    Some(eps) => {
                        row_vals.push(eps);
                        passed &= near_baseline(eps, SCAN_EPS_BASELINE[bi][ri]);
                    }
                    None => {
                        passed = false;
                        details.push_str(&format!(
                            "beta={beta} nu={}: {}; ",
                            row.nu,
                            row.note.as_deref().unwrap_or("no bracket")
                        ));
                    }
                }
            }
            let exponent = table.exponent.unwrap_or(f64::NAN);
            passed &= near_baseline(exponent, SCAN_EXPONENT_BASELINE[bi]);
            details.push_str(&format!(
                "beta={beta}: eps_critical={row_vals:?} exponent={exponent:.6}; "
            ));
            crit.push(row_vals);
        }
        if crit.len() == 2 && crit[0].len() == 2 && crit[1].len() == 2 {
            let monotone = crit[1][0] >= crit[0][0] && crit[1][1] >= crit[0][1];
            details.push_str(&format!(
                "threshold grows with rotation: {monotone} (reported, not asserted)"
            ));
        }
        Ok((passed, details))
    })())
}
