//! Dealiased spectral products for the quadratic nonlinearities.

use num_complex::Complex64;

use crate::error::SpectralError;
use crate::field::SpectralField;
use crate::transform::Transformer;
use crate::Result;

/// Spectral coefficients of the pointwise product f·g, computed
/// pseudo-spectrally with 2/3-style truncation applied to both inputs and the
/// output, which removes quadratic aliasing exactly.
///
/// Both operands must share grid, frame and time. Component counts must match,
/// or one operand must be scalar (broadcast across the other's components).
pub fn convolve_dealiased(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let tr = Transformer::new(f.grid());
    convolve_dealiased_with(&tr, f, g)
}

/// [`convolve_dealiased`] with caller-provided FFT plans for hot loops.
pub fn convolve_dealiased_with(
    tr: &Transformer,
    f: &SpectralField,
    g: &SpectralField,
) -> Result<SpectralField> {
    f.check_compatible(g)?;
    let out_components = match (f.components(), g.components()) {
        (a, b) if a == b => a,
        (1, b) => b,
        (a, 1) => a,
        (a, b) => return Err(SpectralError::ComponentMismatch(a, b)),
    };

    let mut fm = f.clone();
    fm.apply_dealias_mask();
    let mut gm = g.clone();
    gm.apply_dealias_mask();
    let fp = tr.to_physical(&fm);
    let gp = tr.to_physical(&gm);

    let n = f.grid().len();
    let mut prod = vec![Complex64::new(0.0, 0.0); out_components * n];
    for c in 0..out_components {
        let fc = if f.components() == 1 {
            &fp[0..n]
        } else {
            &fp[c * n..(c + 1) * n]
        };
        let gc = if g.components() == 1 {
            &gp[0..n]
        } else {
            &gp[c * n..(c + 1) * n]
        };
        let pc = &mut prod[c * n..(c + 1) * n];
        for idx in 0..n {
            pc[idx] = fc[idx] * gc[idx];
        }
    }

    let mut out = tr.to_spectral(&prod, f.grid(), out_components, f.frame(), f.time)?;
    out.apply_dealias_mask();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Frame;
    use crate::grid::Grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn grid8() -> Grid {
        Grid::new(8, 8, 8, 2.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn convolution_with_one_is_truncation() {
        let g = grid8();
        let mut unit = SpectralField::zeros(g.clone(), 1, Frame::Moving, 0.0);
        unit.set_mode(0, 0, 0, 0, Complex64::new(1.0, 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut f = SpectralField::zeros(g, 1, Frame::Moving, 0.0);
        for v in f.coeffs_mut() {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let out = convolve_dealiased(&unit, &f).unwrap();
        let mut truncated = f.clone();
        truncated.apply_dealias_mask();
        let worst = out
            .coeffs()
            .iter()
            .zip(truncated.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-13, "identity convolution error {worst}");
    }

    #[test]
    fn cosine_squared() {
        let g = grid8();
        let mut f = SpectralField::zeros(g, 1, Frame::Moving, 0.0);
        f.set_mode(0, 1, 0, 0, Complex64::new(0.5, 0.0));
        f.set_mode(0, -1, 0, 0, Complex64::new(0.5, 0.0));
        let out = convolve_dealiased(&f, &f).unwrap();
        // cos² x = ½ + ¼ e^{2ix} + ¼ e^{−2ix}
        assert!((out.get_mode(0, 0, 0, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-13);
        assert!((out.get_mode(0, 2, 0, 0) - Complex64::new(0.25, 0.0)).norm() < 1e-13);
        assert!((out.get_mode(0, -2, 0, 0) - Complex64::new(0.25, 0.0)).norm() < 1e-13);
        assert!(out.get_mode(0, 1, 0, 0).norm() < 1e-13);
    }

    #[test]
    fn matches_direct_convolution_oracle() {
        let g = grid8();
        let cut = g.dealias_cut(8); // 2
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut mk = |seed_shift: u8| {
            let _ = seed_shift;
            let mut f = SpectralField::zeros(g.clone(), 1, Frame::Moving, 0.0);
            for k in -cut..=cut {
                for q in -cut..=cut {
                    for l in -cut..=cut {
                        f.set_mode(
                            0,
                            k,
                            q,
                            l,
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                        );
                    }
                }
            }
            f
        };
        let f = mk(0);
        let h = mk(1);
        let out = convolve_dealiased(&f, &h).unwrap();

        // Direct quadratic-sum convolution over the retained modes.
        let mut expect: HashMap<(i64, i64, i64), Complex64> = HashMap::new();
        for k1 in -cut..=cut {
            for q1 in -cut..=cut {
                for l1 in -cut..=cut {
                    let a = f.get_mode(0, k1, q1, l1);
                    for k2 in -cut..=cut {
                        for q2 in -cut..=cut {
                            for l2 in -cut..=cut {
                                let b = h.get_mode(0, k2, q2, l2);
                                let key = (k1 + k2, q1 + q2, l1 + l2);
                                if key.0.abs() <= cut && key.1.abs() <= cut && key.2.abs() <= cut {
                                    *expect.entry(key).or_insert(Complex64::new(0.0, 0.0)) +=
                                        a * b;
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut worst = 0.0f64;
        for k in -4i64..4 {
            for q in -4i64..4 {
                for l in -4i64..4 {
                    let want = if k.abs() <= cut && q.abs() <= cut && l.abs() <= cut {
                        expect
                            .get(&(k, q, l))
                            .copied()
                            .unwrap_or(Complex64::new(0.0, 0.0))
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    worst = worst.max((out.get_mode(0, k, q, l) - want).norm());
                }
            }
        }
        assert!(worst < 1e-12, "oracle mismatch {worst}");
    }

    #[test]
    fn conjugate_symmetry_preserved() {
        let g = grid8();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut f = SpectralField::zeros(g.clone(), 1, Frame::Moving, 0.0);
        for v in f.coeffs_mut() {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        f.enforce_conjugate_symmetry();
        let mut h = SpectralField::zeros(g, 1, Frame::Moving, 0.0);
        for v in h.coeffs_mut() {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        h.enforce_conjugate_symmetry();
        let out = convolve_dealiased(&f, &h).unwrap();
        assert!(out.max_conjugate_asymmetry() < 1e-13);
    }

    #[test]
    fn mismatched_operands_rejected() {
        let a = SpectralField::zeros(grid8(), 1, Frame::Moving, 0.0);
        let b = SpectralField::zeros(
            Grid::new(8, 8, 8, 4.0 * std::f64::consts::PI).unwrap(),
            1,
            Frame::Moving,
            0.0,
        );
        assert!(convolve_dealiased(&a, &b).is_err());
        let c = SpectralField::zeros(grid8(), 1, Frame::Stationary, 0.0);
        assert!(convolve_dealiased(&a, &c).is_err());
    }
}
