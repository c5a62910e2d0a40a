//! Forward/inverse transforms between coefficient and collocation space.
//!
//! Convention: f(x,y,z) = Σ c(k,η,l) e^{i(kx+ηy+lz)}, so the inverse
//! transform is the unnormalized backward FFT and the forward transform
//! carries the 1/(nx·ny·nz) factor.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::SpectralError;
use crate::field::{Frame, SpectralField};
use crate::grid::Grid;
use crate::Result;

/// Cached FFT plans for one grid shape. Construction is cheap but not free;
/// hot paths (time stepping) should hold one transformer for the run.
pub struct Transformer {
    nx: usize,
    ny: usize,
    nz: usize,
    fwd: [Arc<dyn Fft<f64>>; 3],
    inv: [Arc<dyn Fft<f64>>; 3],
}

impl Transformer {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let (nx, ny, nz) = (grid.nx(), grid.ny(), grid.nz());
        Self {
            nx,
            ny,
            nz,
            fwd: [
                planner.plan_fft_forward(nx),
                planner.plan_fft_forward(ny),
                planner.plan_fft_forward(nz),
            ],
            inv: [
                planner.plan_fft_inverse(nx),
                planner.plan_fft_inverse(ny),
                planner.plan_fft_inverse(nz),
            ],
        }
    }

    fn check_shape(&self, grid: &Grid) -> Result<()> {
        if grid.nx() != self.nx || grid.ny() != self.ny || grid.nz() != self.nz {
            return Err(SpectralError::GridMismatch);
        }
        Ok(())
    }

    /// Collocation values of `field`, same memory layout as the coefficients.
    pub fn to_physical(&self, field: &SpectralField) -> Vec<Complex64> {
        let mut data = field.coeffs().to_vec();
        let n = self.nx * self.ny * self.nz;
        for c in 0..field.components() {
            self.transform_component(&mut data[c * n..(c + 1) * n], false);
        }
        data
    }

    /// Coefficients of collocation values laid out like [`Self::to_physical`].
    pub fn to_spectral(
        &self,
        phys: &[Complex64],
        grid: &Grid,
        components: usize,
        frame: Frame,
        time: f64,
    ) -> Result<SpectralField> {
        self.check_shape(grid)?;
        let n = self.nx * self.ny * self.nz;
        if phys.len() != n * components {
            return Err(SpectralError::InvalidGrid(format!(
                "physical buffer has {} entries, grid wants {}",
                phys.len(),
                n * components
            )));
        }
        let mut data = phys.to_vec();
        let scale = 1.0 / n as f64;
        for c in 0..components {
            let slice = &mut data[c * n..(c + 1) * n];
            self.transform_component(slice, true);
            for v in slice.iter_mut() {
                *v *= scale;
            }
        }
        SpectralField::from_coeffs(grid.clone(), components, frame, time, data)
    }

    fn transform_component(&self, data: &mut [Complex64], forward: bool) {
        let plans = if forward { &self.fwd } else { &self.inv };
        // z: contiguous runs of length nz.
        plans[2].process(data);
        // y: stride nz within each (i)-block.
        Self::strided_fft(data, self.ny, self.nz, &plans[1]);
        // x: stride ny·nz.
        Self::strided_fft(data, self.nx, self.ny * self.nz, &plans[0]);
    }

    fn strided_fft(data: &mut [Complex64], n_axis: usize, stride: usize, fft: &Arc<dyn Fft<f64>>) {
        let block = n_axis * stride;
        let mut scratch = vec![Complex64::new(0.0, 0.0); n_axis];
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                for q in 0..n_axis {
                    scratch[q] = data[base + off + q * stride];
                }
                fft.process(&mut scratch);
                for q in 0..n_axis {
                    data[base + off + q * stride] = scratch[q];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sum::kahan_sum;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Grid {
        Grid::new(8, 16, 4, 8.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn roundtrip_identity() {
        let g = grid();
        let tr = Transformer::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut f = SpectralField::zeros(g.clone(), 3, Frame::Moving, 0.5);
        for v in f.coeffs_mut() {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let phys = tr.to_physical(&f);
        let back = tr.to_spectral(&phys, &g, 3, Frame::Moving, 0.5).unwrap();
        let worst = f
            .coeffs()
            .iter()
            .zip(back.coeffs())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(worst < 1e-12, "roundtrip error {worst}");
    }

    #[test]
    fn cosine_transforms_to_half_modes() {
        let g = grid();
        let tr = Transformer::new(&g);
        let n = g.len();
        let mut phys = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                for m in 0..g.nz() {
                    phys[(i * g.ny() + j) * g.nz() + m] = Complex64::new(g.x(i).cos(), 0.0);
                }
            }
        }
        let f = tr.to_spectral(&phys, &g, 1, Frame::Stationary, 0.0).unwrap();
        assert!((f.get_mode(0, 1, 0, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-13);
        assert!((f.get_mode(0, -1, 0, 0) - Complex64::new(0.5, 0.0)).norm() < 1e-13);
        assert!(f.get_mode(0, 0, 0, 0).norm() < 1e-13);
        assert!(f.get_mode(0, 2, 0, 0).norm() < 1e-13);
    }

    #[test]
    fn single_mode_is_plane_wave() {
        let g = grid();
        let tr = Transformer::new(&g);
        let mut f = SpectralField::zeros(g.clone(), 1, Frame::Stationary, 0.0);
        f.set_mode(0, 2, -3, 1, Complex64::new(1.0, 0.0));
        let phys = tr.to_physical(&f);
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                for m in 0..g.nz() {
                    let arg = 2.0 * g.x(i) + g.eta(crate::grid::index_of_freq(g.ny(), -3)) * g.y(j)
                        + g.z(m);
                    let expect = Complex64::new(arg.cos(), arg.sin());
                    let got = phys[(i * g.ny() + j) * g.nz() + m];
                    assert!((got - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn parseval_mean_square() {
        let g = grid();
        let tr = Transformer::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = g.len();
        let mut phys = vec![Complex64::new(0.0, 0.0); n];
        for v in &mut phys {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        }
        let f = tr.to_spectral(&phys, &g, 1, Frame::Moving, 0.0).unwrap();
        let mean_sq = kahan_sum(phys.iter().map(|v| v.norm_sqr())) / n as f64;
        let coeff_sq = kahan_sum(f.coeffs().iter().map(|v| v.norm_sqr()));
        let rel = (mean_sq - coeff_sq).abs() / mean_sq;
        assert!(rel < 1e-12, "parseval relative error {rel}");
    }

    #[test]
    fn real_data_gives_conjugate_symmetry() {
        let g = grid();
        let tr = Transformer::new(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = g.len();
        let phys: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
            .collect();
        let f = tr.to_spectral(&phys, &g, 1, Frame::Moving, 0.0).unwrap();
        assert!(f.max_conjugate_asymmetry() < 1e-13);
    }
}
