//! Property tests for the spectral core: transform roundtrips, Parseval,
//! projection algebra, and symmetry preservation across random fields.

use num_complex::Complex64;
use proptest::prelude::*;

use corioflow_spectral::{
    convolve_dealiased, sum::kahan_sum, Frame, Grid, ModeClass, SpectralField, Transformer,
};

fn field_from_seed(grid: &Grid, seed: u64, components: usize) -> SpectralField {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid.clone(), components, Frame::Moving, 0.0);
    for v in f.coeffs_mut() {
        *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    f
}

fn axis_sizes() -> impl Strategy<Value = usize> {
    prop_oneof![Just(4usize), Just(8), Just(16)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transform_roundtrip(nx in axis_sizes(), ny in axis_sizes(), nz in axis_sizes(), seed in 0u64..1000) {
        let grid = Grid::new(nx, ny, nz, 7.0).unwrap();
        let f = field_from_seed(&grid, seed, 1);
        let tr = Transformer::new(&grid);
        let phys = tr.to_physical(&f);
        let back = tr.to_spectral(&phys, &grid, 1, Frame::Moving, 0.0).unwrap();
        let worst = f.coeffs().iter().zip(back.coeffs())
            .map(|(a, b)| (a - b).norm()).fold(0.0f64, f64::max);
        prop_assert!(worst < 1e-12);
    }

    #[test]
    fn parseval_for_real_fields(seed in 0u64..1000) {
        let grid = Grid::new(8, 16, 8, 11.0).unwrap();
        let tr = Transformer::new(&grid);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let phys: Vec<Complex64> = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
            .collect();
        let f = tr.to_spectral(&phys, &grid, 1, Frame::Moving, 0.0).unwrap();
        let mean_sq = kahan_sum(phys.iter().map(|v| v.norm_sqr())) / grid.len() as f64;
        let coeff_sq = kahan_sum(f.coeffs().iter().map(|v| v.norm_sqr()));
        prop_assert!((mean_sq - coeff_sq).abs() <= 1e-12 * mean_sq.max(1e-30));
    }

    #[test]
    fn projections_partition_and_are_orthogonal(seed in 0u64..1000) {
        let grid = Grid::new(8, 8, 8, 5.0).unwrap();
        let f = field_from_seed(&grid, seed, 3);
        let parts = [
            f.project_modes(ModeClass::DoubleZero),
            f.project_modes(ModeClass::SimpleZero),
            f.project_modes(ModeClass::NonZero),
        ];
        for idx in 0..f.coeffs().len() {
            let sum: Complex64 = parts.iter().map(|p| p.coeffs()[idx]).sum();
            prop_assert!((sum - f.coeffs()[idx]).norm() < 1e-14);
        }
        for a in 0..3 {
            for b in (a + 1)..3 {
                let inner: Complex64 = parts[a].coeffs().iter().zip(parts[b].coeffs())
                    .map(|(x, y)| x * y.conj()).sum();
                prop_assert_eq!(inner, Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn convolution_preserves_symmetry_and_mask(seed in 0u64..1000) {
        let grid = Grid::new(8, 8, 8, 9.0).unwrap();
        let mut f = field_from_seed(&grid, seed, 1);
        f.enforce_conjugate_symmetry();
        let mut g = field_from_seed(&grid, seed.wrapping_add(1), 1);
        g.enforce_conjugate_symmetry();
        let out = convolve_dealiased(&f, &g).unwrap();
        prop_assert!(out.max_conjugate_asymmetry() < 1e-13);
        let cut = grid.dealias_cut(8);
        for i in 0..8 {
            for j in 0..8 {
                for m in 0..8 {
                    let (k, q, l) = (grid.kx(i), grid.eta_int(j), grid.lz(m));
                    if k.abs() > cut || q.abs() > cut || l.abs() > cut {
                        prop_assert_eq!(out.get(0, i, j, m), Complex64::new(0.0, 0.0));
                    }
                }
            }
        }
    }
}
