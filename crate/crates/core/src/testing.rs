//! Synthetic fields shared by unit tests, integration tests and examples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::spectral::{
    forward_transform, leray_project, mode_storage_index, truncate_coeffs, Grid3,
    SpectralScalarField, SpectralVectorField,
};

/// Uniform random samples in `[-1, 1]` and their coefficients.
pub fn random_real_field(grid: &Grid3, seed: u64) -> (Vec<f64>, SpectralScalarField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<f64> = (0..grid.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let f = forward_transform(&samples, grid).expect("grid-sized samples");
    (samples, f)
}

/// Random real vector field with zero mean (not projected).
pub fn random_vector_field(grid: &Grid3, seed: u64) -> SpectralVectorField {
    let comps = std::array::from_fn(|i| {
        let (_, mut f) = random_real_field(grid, seed.wrapping_mul(3).wrapping_add(i as u64));
        f.coeffs_mut()[0] = Complex64::default();
        f
    });
    SpectralVectorField::new(comps).expect("shared grid")
}

/// Leray projection of [`random_vector_field`].
pub fn random_div_free(grid: &Grid3, seed: u64) -> SpectralVectorField {
    leray_project(&random_vector_field(grid, seed))
}

/// [`random_div_free`] truncated to the 2/3 band and scaled to `max|v̂| = amplitude`.
pub fn band_limited_div_free(grid: &Grid3, seed: u64, amplitude: f64) -> SpectralVectorField {
    let v = random_div_free(grid, seed);
    let comps = v.into_components().map(|mut c| {
        truncate_coeffs(grid, c.coeffs_mut());
        c
    });
    let v = leray_project(&SpectralVectorField::new(comps).expect("shared grid"));
    let m = v.max_abs();
    v.scaled(amplitude / m)
}

/// 2D Taylor–Green cell `A (sin x1 cos x2, -cos x1 sin x2, 0)` on a grid with `k_min = 1`
/// horizontally.
pub fn taylor_green(grid: &Grid3, amplitude: f64) -> SpectralVectorField {
    let q = Complex64::new(0.0, -0.25 * amplitude);
    let mut u = SpectralScalarField::zeros(*grid);
    let mut v = SpectralScalarField::zeros(*grid);
    // sin x1 cos x2 = Σ_{±,±} (∓ i/4) e^{i(±x1 ± x2)}
    for (s1, s2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
        u.coeffs_mut()[mode_storage_index(grid, [s1, s2, 0])] += q * s1 as f64;
        v.coeffs_mut()[mode_storage_index(grid, [s1, s2, 0])] -= q * s2 as f64;
    }
    let mut f = SpectralVectorField::new([u, v, SpectralScalarField::zeros(*grid)]).expect("shared grid");
    f.div_free = true;
    f
}
