//! Reference numerical integration of the multiplier ODEs.
//!
//! Each weight solves d(log v)/dt = rate(t) from value 1, so fourth-order
//! integration reduces to composite Simpson quadrature of the rate. The mesh
//! is graded around the critical time η/k: step max(inner, |s−η/k|)/128,
//! which resolves the arctangent transition and keeps the far tail cheap.
//! This module exists purely to cross-check the closed forms in
//! [`crate::symbols`]; it shares no code with them.

use corioflow_spectral::sum::KahanSum;
use corioflow_spectral::ModeIndex;

use crate::{m_window_length, MultiplierError, Result};

fn integrate_graded<F: Fn(f64) -> f64>(a: f64, b: f64, center: f64, inner: f64, rate: F) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let mut acc = KahanSum::new();
    let mut s = a;
    while b - s > 0.0 {
        let h = ((s - center).abs().max(inner) / 128.0).min(b - s);
        let end = s + h;
        let mid = s + 0.5 * h;
        acc.add(h / 6.0 * (rate(s) + 4.0 * rate(mid) + rate(end)));
        if end >= b || h == 0.0 {
            break;
        }
        s = end;
    }
    acc.value()
}

pub fn m_reference(t: f64, mode: &ModeIndex, nu: f64) -> Result<f64> {
    if mode.k == 0 {
        return Err(MultiplierError::KZeroMode);
    }
    if !(nu > 0.0) {
        return Err(MultiplierError::BadNu(nu));
    }
    let k = mode.k as f64;
    let lsq = (mode.l * mode.l) as f64;
    let tc = mode.eta / k;
    let entry = tc.max(0.0);
    let exit = tc + m_window_length(nu);
    if exit <= 0.0 {
        return Ok(1.0);
    }
    let upper = t.min(exit);
    if upper <= entry {
        return Ok(1.0);
    }
    let inner = ((k * k + lsq).sqrt() / k.abs()).max(1.0);
    let rate = |s: f64| {
        let sh = mode.eta - k * s;
        k * sh / (k * k + sh * sh + lsq)
    };
    Ok(integrate_graded(entry, upper, tc, inner, rate).exp())
}

pub fn m1_reference(t: f64, mode: &ModeIndex, nu: f64) -> Result<f64> {
    if mode.k == 0 {
        return Err(MultiplierError::KZeroMode);
    }
    if !(nu > 0.0) {
        return Err(MultiplierError::BadNu(nu));
    }
    let k = mode.k as f64;
    let nu13 = nu.powf(1.0 / 3.0);
    let tc = mode.eta / k;
    let rate = |s: f64| {
        let sh = mode.eta - k * s;
        -nu13 * k * k / (k * k + nu13 * nu13 * sh * sh)
    };
    Ok(integrate_graded(0.0, t, tc, nu13.recip(), rate).exp())
}

pub fn m2_reference(t: f64, mode: &ModeIndex) -> Result<f64> {
    if mode.k == 0 {
        return Err(MultiplierError::KZeroMode);
    }
    let k = mode.k as f64;
    let lsq = (mode.l * mode.l) as f64;
    let tc = mode.eta / k;
    let inner = ((k * k + lsq).sqrt() / k.abs()).max(1.0);
    let rate = |s: f64| {
        let sh = mode.eta - k * s;
        -k * k / (k * k + sh * sh + lsq)
    };
    Ok(integrate_graded(0.0, t, tc, inner, rate).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{m1_symbol, m2_symbol, m_symbol};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn reference_matches_known_values() {
        let mode = ModeIndex::new(1, 0.0, 0);
        assert!(rel_err(m_reference(1.0, &mode, 1.0).unwrap(), 1.0 / 2.0f64.sqrt()) < 1e-10);
        assert!(
            rel_err(
                m1_reference(1.0, &mode, 1.0).unwrap(),
                (-std::f64::consts::FRAC_PI_4).exp()
            ) < 1e-10
        );
        assert!(
            rel_err(
                m2_reference(5e4, &mode).unwrap(),
                m2_symbol(5e4, &mode).unwrap().0
            ) < 1e-9
        );
    }

    #[test]
    fn closed_forms_match_reference_on_random_sweep() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut worst = 0.0f64;
        for _ in 0..250 {
            let nu: f64 = if rng.gen_bool(0.5) { 1e-3 } else { 1e-4 };
            let k = loop {
                let k = rng.gen_range(-8i64..=8);
                if k != 0 {
                    break k;
                }
            };
            let l = rng.gen_range(-8i64..=8);
            let eta = rng.gen_range(-64.0..64.0);
            let t = rng.gen_range(0.0..2e3 * nu.powf(-1.0 / 3.0));
            let mode = ModeIndex::new(k, eta, l);
            worst = worst.max(rel_err(
                m_symbol(t, &mode, nu).unwrap().0,
                m_reference(t, &mode, nu).unwrap(),
            ));
            worst = worst.max(rel_err(
                m1_symbol(t, &mode, nu).unwrap().0,
                m1_reference(t, &mode, nu).unwrap(),
            ));
            worst = worst.max(rel_err(
                m2_symbol(t, &mode).unwrap().0,
                m2_reference(t, &mode).unwrap(),
            ));
        }
        assert!(worst < 1e-9, "worst closed-form vs reference error {worst}");
    }
}
