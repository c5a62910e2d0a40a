//! Weighted Sobolev norms ‖w·f‖_{H^n} over the mode lattice.

use corioflow_spectral::sum::KahanSum;
use corioflow_spectral::SpectralField;

use crate::symbols::{a_symbol, m1_symbol, m2_symbol};
use crate::{MultiplierError, Result};

/// Weight applied inside the norm: nothing, 𝓜 = M₁·M₂, or the full
/// composite 𝒜 = m·𝓜·e^{δν^{1/3}t}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    None,
    M,
    A,
}

/// √( Σ ⟨k,η,l⟩^{2n} · w(t,k,η,l)² · |coeff|² · Δη ), summed over all
/// components with compensated accumulation in storage order (deterministic
/// under any parallel schedule upstream).
///
/// The multiplier weights are defined only on k≠0 modes; requesting them on a
/// field carrying k=0 energy is an error. The evaluation time is the field's
/// own time stamp.
pub fn weighted_sobolev_norm(
    field: &SpectralField,
    weight: Weight,
    n: f64,
    nu: f64,
    delta: f64,
) -> Result<f64> {
    let grid = field.grid();
    let t = field.time;
    let mut acc = KahanSum::new();
    for c in 0..field.components() {
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                for m in 0..grid.nz() {
                    let coeff = field.get(c, i, j, m);
                    let mag_sq = coeff.norm_sqr();
                    let mode = grid.mode(i, j, m);
                    let w = match weight {
                        Weight::None => 1.0,
                        _ if mode.k == 0 => {
                            if mag_sq > 0.0 {
                                return Err(MultiplierError::KZeroContent);
                            }
                            continue;
                        }
                        Weight::M => m1_symbol(t, &mode, nu)?.0 * m2_symbol(t, &mode)?.0,
                        Weight::A => a_symbol(t, &mode, nu, delta)?,
                    };
                    if mag_sq == 0.0 {
                        continue;
                    }
                    acc.add(mode.bracket_sq().powf(n) * w * w * mag_sq);
                }
            }
        }
    }
    Ok((acc.value() * grid.delta_eta()).sqrt())
}
