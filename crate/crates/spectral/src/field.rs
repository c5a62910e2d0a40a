//! Complex coefficient storage for scalar and 3-vector fields.

use num_complex::Complex64;

use crate::error::SpectralError;
use crate::grid::{index_of_freq, Grid, ModeClass};
use crate::sum::KahanSum;
use crate::Result;

/// Frame tag: `Stationary` coefficients multiply e^{i(kx+ηy+lz)} in lab
/// coordinates; `Moving` coefficients do so in the sheared coordinates
/// (x−yt, y, z), where the shear enters through symbols only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Stationary,
    Moving,
}

/// Dense spectral coefficients for a multi-component field (velocity uses
/// 3 components; packed quadratic products use 6).
///
/// Layout: `coeffs[((c·nx + i)·ny + j)·nz + m]` — component-major, then
/// k-major, η, l-minor, each axis in FFT frequency order.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Grid,
    components: usize,
    frame: Frame,
    pub time: f64,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, components: usize, frame: Frame, time: f64) -> Self {
        assert!(
            components >= 1,
            "fields are scalars or 3-vectors"
        );
        let n = grid.len() * components;
        Self {
            grid,
            components,
            frame,
            time,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_coeffs(
        grid: Grid,
        components: usize,
        frame: Frame,
        time: f64,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if components == 0 {
            return Err(SpectralError::ComponentMismatch(components, 1));
        }
        if coeffs.len() != grid.len() * components {
            return Err(SpectralError::InvalidGrid(format!(
                "coefficient buffer has {} entries, grid wants {}",
                coeffs.len(),
                grid.len() * components
            )));
        }
        Ok(Self {
            grid,
            components,
            frame,
            time,
            coeffs,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn components(&self) -> usize {
        self.components
    }
    pub fn frame(&self) -> Frame {
        self.frame
    }
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    #[inline]
    pub fn idx(&self, c: usize, i: usize, j: usize, m: usize) -> usize {
        ((c * self.grid.nx() + i) * self.grid.ny() + j) * self.grid.nz() + m
    }

    #[inline]
    pub fn get(&self, c: usize, i: usize, j: usize, m: usize) -> Complex64 {
        self.coeffs[self.idx(c, i, j, m)]
    }

    #[inline]
    pub fn set(&mut self, c: usize, i: usize, j: usize, m: usize, v: Complex64) {
        let idx = self.idx(c, i, j, m);
        self.coeffs[idx] = v;
    }

    /// Coefficient at explicit frequencies (k, η_int, l); frequencies must be
    /// representable on the grid.
    pub fn get_mode(&self, c: usize, k: i64, eta_int: i64, l: i64) -> Complex64 {
        let g = &self.grid;
        self.get(
            c,
            index_of_freq(g.nx(), k),
            index_of_freq(g.ny(), eta_int),
            index_of_freq(g.nz(), l),
        )
    }

    pub fn set_mode(&mut self, c: usize, k: i64, eta_int: i64, l: i64, v: Complex64) {
        let (nx, ny, nz) = (self.grid.nx(), self.grid.ny(), self.grid.nz());
        self.set(
            c,
            index_of_freq(nx, k),
            index_of_freq(ny, eta_int),
            index_of_freq(nz, l),
            v,
        );
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.coeffs[c * n..(c + 1) * n]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let n = self.grid.len();
        &mut self.coeffs[c * n..(c + 1) * n]
    }

    /// Checks that two fields can enter a binary operation together.
    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(SpectralError::GridMismatch);
        }
        if self.frame != other.frame || self.time != other.time {
            return Err(SpectralError::FrameMismatch);
        }
        Ok(())
    }

    /// Restriction to one of the three k/l mode classes; the three
    /// projections are mutually orthogonal and sum to the identity.
    pub fn project_modes(&self, class: ModeClass) -> Self {
        let mut out = self.clone();
        out.project_modes_in_place(class);
        out
    }

    pub fn project_modes_in_place(&mut self, class: ModeClass) {
        let (nx, ny, nz) = (self.grid.nx(), self.grid.ny(), self.grid.nz());
        for c in 0..self.components {
            for i in 0..nx {
                let k = self.grid.kx(i);
                for m in 0..nz {
                    let l = self.grid.lz(m);
                    if ModeClass::of(k, l) != class {
                        for j in 0..ny {
                            let idx = ((c * nx + i) * ny + j) * nz + m;
                            self.coeffs[idx] = Complex64::new(0.0, 0.0);
                        }
                    }
                }
            }
        }
    }

    /// Zeroes coefficients outside the dealias ball.
    pub fn apply_dealias_mask(&mut self) {
        let (nx, ny, nz) = (self.grid.nx(), self.grid.ny(), self.grid.nz());
        let (cx, cy, cz) = (
            self.grid.dealias_cut(nx),
            self.grid.dealias_cut(ny),
            self.grid.dealias_cut(nz),
        );
        for c in 0..self.components {
            for i in 0..nx {
                let kill_x = self.grid.kx(i).abs() > cx;
                for j in 0..ny {
                    let kill_y = self.grid.eta_int(j).abs() > cy;
                    for m in 0..nz {
                        if kill_x || kill_y || self.grid.lz(m).abs() > cz {
                            let idx = ((c * nx + i) * ny + j) * nz + m;
                            self.coeffs[idx] = Complex64::new(0.0, 0.0);
                        }
                    }
                }
            }
        }
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.coeffs {
            *v *= s;
        }
    }

    /// self += a·other (coefficients only; metadata unchanged).
    pub fn axpy(&mut self, a: Complex64, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        if self.components != other.components {
            return Err(SpectralError::ComponentMismatch(
                self.components,
                other.components,
            ));
        }
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += a * y;
        }
        Ok(())
    }

    /// Squared l² norm with the grid measure: Σ |c|² Δη, summed over all
    /// components with compensated accumulation.
    pub fn l2_norm_sq(&self) -> f64 {
        let mut acc = KahanSum::new();
        for v in &self.coeffs {
            acc.add(v.norm_sqr());
        }
        acc.value() * self.grid.delta_eta()
    }

    /// Largest |coeff(−k,−η,−l) − conj(coeff(k,η,l))| over modes whose mirror
    /// exists on the lattice (the unpaired −n/2 rows are skipped).
    pub fn max_conjugate_asymmetry(&self) -> f64 {
        let (nx, ny, nz) = (self.grid.nx(), self.grid.ny(), self.grid.nz());
        let mut worst = 0.0f64;
        for c in 0..self.components {
            for i in 0..nx {
                let k = self.grid.kx(i);
                if k == -(nx as i64) / 2 {
                    continue;
                }
                let ic = index_of_freq(nx, -k);
                for j in 0..ny {
                    let q = self.grid.eta_int(j);
                    if q == -(ny as i64) / 2 {
                        continue;
                    }
                    let jc = index_of_freq(ny, -q);
                    for m in 0..nz {
                        let l = self.grid.lz(m);
                        if l == -(nz as i64) / 2 {
                            continue;
                        }
                        let mc = index_of_freq(nz, -l);
                        let d = (self.get(c, ic, jc, mc) - self.get(c, i, j, m).conj()).norm();
                        worst = worst.max(d);
                    }
                }
            }
        }
        worst
    }

    /// Restores exact conjugate symmetry by averaging mirror pairs and
    /// zeroing the unpaired −n/2 rows; a no-op up to rounding on fields that
    /// represent real data.
    pub fn enforce_conjugate_symmetry(&mut self) {
        let (nx, ny, nz) = (self.grid.nx(), self.grid.ny(), self.grid.nz());
        for c in 0..self.components {
            for i in 0..nx {
                let k = self.grid.kx(i);
                for j in 0..ny {
                    let q = self.grid.eta_int(j);
                    for m in 0..nz {
                        let l = self.grid.lz(m);
                        if k == -(nx as i64) / 2 || q == -(ny as i64) / 2 || l == -(nz as i64) / 2
                        {
                            let idx = ((c * nx + i) * ny + j) * nz + m;
                            self.coeffs[idx] = Complex64::new(0.0, 0.0);
                            continue;
                        }
                        // Touch each pair once.
                        if (k, q, l) > (-k, -q, -l) {
                            continue;
                        }
                        let ic = index_of_freq(nx, -k);
                        let jc = index_of_freq(ny, -q);
                        let mc = index_of_freq(nz, -l);
                        let a = self.get(c, i, j, m);
                        let b = self.get(c, ic, jc, mc);
                        let avg = 0.5 * (a + b.conj());
                        self.set(c, i, j, m, avg);
                        self.set(c, ic, jc, mc, avg.conj());
                    }
                }
            }
        }
    }
}
