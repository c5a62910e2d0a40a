//! Mode lattice for T × R × T and the moving-frame frequency symbols.

use crate::error::SpectralError;
use crate::Result;

/// Truncated mode lattice: `nx`/`nz` integer frequencies on the two tori and
/// `ny` frequencies η ∈ (2π/ly)·{−ny/2, …, ny/2−1} discretizing R.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nx: usize,
    ny: usize,
    nz: usize,
    ly: f64,
    dealias_fraction: f64,
}

impl Grid {
    pub const DEFAULT_DEALIAS: f64 = 2.0 / 3.0;

    /// Grid with the default 2/3 dealiasing fraction.
    pub fn new(nx: usize, ny: usize, nz: usize, ly: f64) -> Result<Self> {
        Self::with_dealias(nx, ny, nz, ly, Self::DEFAULT_DEALIAS)
    }

    pub fn with_dealias(
        nx: usize,
        ny: usize,
        nz: usize,
        ly: f64,
        dealias_fraction: f64,
    ) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny), ("nz", nz)] {
            if n < 4 || n % 2 != 0 {
                return Err(SpectralError::InvalidGrid(format!(
                    "{name}={n} must be even and >= 4"
                )));
            }
        }
        if !(ly > 0.0) {
            return Err(SpectralError::InvalidGrid(format!("ly={ly} must be > 0")));
        }
        if !(dealias_fraction > 0.0 && dealias_fraction <= 1.0) {
            return Err(SpectralError::InvalidGrid(format!(
                "dealias_fraction={dealias_fraction} must lie in (0,1]"
            )));
        }
        Ok(Self {
            nx,
            ny,
            nz,
            ly,
            dealias_fraction,
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn nz(&self) -> usize {
        self.nz
    }
    pub fn ly(&self) -> f64 {
        self.ly
    }
    pub fn dealias_fraction(&self) -> f64 {
        self.dealias_fraction
    }

    /// Modes per component.
    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// η-lattice spacing 2π/ly, also the measure weight in norms over R.
    pub fn delta_eta(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.ly
    }

    /// Integer x-frequency at storage index `i` (FFT order).
    pub fn kx(&self, i: usize) -> i64 {
        freq_of_index(self.nx, i)
    }

    /// Integer η index at storage index `j`; multiply by Δη for the frequency.
    pub fn eta_int(&self, j: usize) -> i64 {
        freq_of_index(self.ny, j)
    }

    /// y-frequency at storage index `j`.
    pub fn eta(&self, j: usize) -> f64 {
        self.eta_int(j) as f64 * self.delta_eta()
    }

    /// Integer z-frequency at storage index `m` (FFT order).
    pub fn lz(&self, m: usize) -> i64 {
        freq_of_index(self.nz, m)
    }

    pub fn mode(&self, i: usize, j: usize, m: usize) -> ModeIndex {
        ModeIndex::new(self.kx(i), self.eta(j), self.lz(m))
    }

    /// Largest retained |frequency| per axis under the dealias fraction.
    pub fn dealias_cut(&self, n: usize) -> i64 {
        (n as f64 * self.dealias_fraction / 2.0 - 1e-9).floor() as i64
    }

    pub fn in_dealias_ball(&self, k: i64, eta_int: i64, l: i64) -> bool {
        k.abs() <= self.dealias_cut(self.nx)
            && eta_int.abs() <= self.dealias_cut(self.ny)
            && l.abs() <= self.dealias_cut(self.nz)
    }

    /// Largest integer x-frequency with energy allowed after dealiasing.
    pub fn k_max(&self) -> i64 {
        self.dealias_cut(self.nx)
    }

    /// Largest retained |η|.
    pub fn eta_max(&self) -> f64 {
        self.dealias_cut(self.ny) as f64 * self.delta_eta()
    }

    /// Collocation point x_i = 2π·i/nx on the streamwise torus.
    pub fn x(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * i as f64 / self.nx as f64
    }

    /// Collocation point y_j = ly·j/ny on the periodized y axis.
    pub fn y(&self, j: usize) -> f64 {
        self.ly * j as f64 / self.ny as f64
    }

    /// Collocation point z_m = 2π·m/nz on the spanwise torus.
    pub fn z(&self, m: usize) -> f64 {
        2.0 * std::f64::consts::PI * m as f64 / self.nz as f64
    }
}

/// FFT storage order: indices 0..n/2 hold frequencies 0..n/2−1, indices
/// n/2..n hold −n/2..−1.
pub fn freq_of_index(n: usize, idx: usize) -> i64 {
    debug_assert!(idx < n);
    if idx < n / 2 {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Inverse of [`freq_of_index`]; `k` must be representable on the axis.
pub fn index_of_freq(n: usize, k: i64) -> usize {
    debug_assert!(-(n as i64) / 2 <= k && k < n as i64 / 2);
    if k >= 0 {
        k as usize
    } else {
        (k + n as i64) as usize
    }
}

/// A single Fourier mode (k, η, l) ∈ Z × R × Z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex {
    pub k: i64,
    pub eta: f64,
    pub l: i64,
}

impl ModeIndex {
    pub fn new(k: i64, eta: f64, l: i64) -> Self {
        Self { k, eta, l }
    }

    pub fn is_zero(&self) -> bool {
        self.k == 0 && self.eta == 0.0 && self.l == 0
    }

    /// |k,η,l|² = k² + η² + l².
    pub fn norm_sq(&self) -> f64 {
        (self.k * self.k + self.l * self.l) as f64 + self.eta * self.eta
    }

    /// ⟨k,η,l⟩² = 1 + |k,η,l|².
    pub fn bracket_sq(&self) -> f64 {
        1.0 + self.norm_sq()
    }

    pub fn class(&self) -> ModeClass {
        ModeClass::of(self.k, self.l)
    }

    /// Sheared frequency vector κ(t) = (k, η−kt, l).
    pub fn kappa(&self, t: f64) -> [f64; 3] {
        [self.k as f64, shear_frequency(self, t), self.l as f64]
    }

    /// |κ(t)|² = k² + (η−kt)² + l².
    pub fn kappa_norm_sq(&self, t: f64) -> f64 {
        let s = shear_frequency(self, t);
        (self.k * self.k + self.l * self.l) as f64 + s * s
    }
}

/// The k/l partition driving all of the dynamics: streamwise-and-spanwise
/// constant modes, spanwise-varying shear-free modes, and sheared modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeClass {
    /// k = 0 and l = 0.
    DoubleZero,
    /// k = 0 and l ≠ 0.
    SimpleZero,
    /// k ≠ 0.
    NonZero,
}

impl ModeClass {
    pub fn of(k: i64, l: i64) -> Self {
        if k != 0 {
            ModeClass::NonZero
        } else if l != 0 {
            ModeClass::SimpleZero
        } else {
            ModeClass::DoubleZero
        }
    }
}

/// y-frequency of ∂_y − t∂_x at time t: η − k·t.
pub fn shear_frequency(mode: &ModeIndex, t: f64) -> f64 {
    mode.eta - mode.k as f64 * t
}

/// Symbol of the sheared Laplacian: −(k² + (η−kt)² + l²) ≤ 0.
pub fn laplacian_l_symbol(mode: &ModeIndex, t: f64) -> f64 {
    -mode.kappa_norm_sq(t)
}
