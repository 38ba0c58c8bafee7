use rustfft::num_complex::Complex64;

use super::fft::{Direction, Fft3};
use super::grid::Grid3;
use super::tables::GridTables;
use crate::error::{Error, Result};

/// Fourier coefficients of a scalar field on the periodic box.
///
/// See the [`spectral`](crate::spectral) module docs for the storage order and
/// normalization shared with checkpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralScalarField {
    grid: Grid3,
    coeffs: Vec<Complex64>,
}

impl SpectralScalarField {
    pub fn zeros(grid: Grid3) -> Self {
        Self {
            grid,
            coeffs: vec![Complex64::default(); grid.len()],
        }
    }

    pub fn from_coeffs(grid: Grid3, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    /// Real field `2 Re(c e^{ik.x})`: coefficient `c` at mode `m` and `conj(c)` at `-m`.
    /// A self-conjugate mode (zero or Nyquist) receives `Re c`.
    pub fn single_mode(grid: Grid3, m: [i64; 3], c: Complex64) -> Self {
        let mut f = Self::zeros(grid);
        let idx = mode_storage_index(&grid, m);
        let mirror = grid.mirror(idx);
        if mirror == idx {
            f.coeffs[idx] = Complex64::new(c.re, 0.0);
        } else {
            f.coeffs[idx] = c;
            f.coeffs[mirror] = c.conj();
        }
        f
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `||a||_{L^2}^2 = V Σ |â|^2`.
    pub fn l2_sq(&self) -> f64 {
        self.grid.volume() * self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn l2(&self) -> f64 {
        self.l2_sq().sqrt()
    }

    /// `∫ a conj(b) dx`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let s: Complex64 = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum();
        s * self.grid.volume()
    }

    /// `max_m |â(-m) - conj(â(m))|`; zero for real fields.
    pub fn hermitian_defect(&self) -> f64 {
        let t = GridTables::get(&self.grid);
        (0..self.coeffs.len())
            .map(|i| (self.coeffs[t.mirror[i]] - self.coeffs[i].conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Replace the field by its Hermitian part `(â(m) + conj â(-m)) / 2`.
    pub fn symmetrize(&mut self) {
        let t = GridTables::get(&self.grid);
        let sym: Vec<Complex64> = (0..self.coeffs.len())
            .map(|i| 0.5 * (self.coeffs[i] + self.coeffs[t.mirror[i]].conj()))
            .collect();
        self.coeffs = sym;
    }
}

/// Storage index of signed mode indices `m` (each reduced modulo its axis length).
pub fn mode_storage_index(grid: &Grid3, m: [i64; 3]) -> usize {
    let wrap = |m: i64, n: usize| m.rem_euclid(n as i64) as usize;
    grid.index(wrap(m[0], grid.n_h), wrap(m[1], grid.n_h), wrap(m[2], grid.n_v))
}

/// Coefficients `â(m) = N^{-1} Σ_x a(x) e^{-ik.x}` of real samples in storage order.
pub fn forward_transform(samples: &[f64], grid: &Grid3) -> Result<SpectralScalarField> {
    if samples.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            actual: samples.len(),
        });
    }
    let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward_in_place(grid, &mut data);
    Ok(SpectralScalarField {
        grid: *grid,
        coeffs: data,
    })
}

/// Real part of `a(x) = Σ_m â(m) e^{ik.x}`.
pub fn inverse_transform(field: &SpectralScalarField) -> Vec<f64> {
    inverse_transform_complex(field)
        .into_iter()
        .map(|z| z.re)
        .collect()
}

/// Full complex synthesis; its imaginary part measures departure from Hermitian symmetry.
pub fn inverse_transform_complex(field: &SpectralScalarField) -> Vec<Complex64> {
    let mut data = field.coeffs.clone();
    Fft3::for_shape(field.grid.shape()).process(&mut data, Direction::Inverse);
    data
}

fn forward_in_place(grid: &Grid3, data: &mut [Complex64]) {
    Fft3::for_shape(grid.shape()).process(data, Direction::Forward);
    let inv_n = 1.0 / grid.len() as f64;
    data.iter_mut().for_each(|z| *z *= inv_n);
}

/// Two Hermitian fields synthesized with a single complex transform.
pub(crate) fn inverse_pair(a: &[Complex64], b: &[Complex64], grid: &Grid3) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::i();
    let mut data: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| x + i * y).collect();
    Fft3::for_shape(grid.shape()).process(&mut data, Direction::Inverse);
    data.into_iter().map(|z| (z.re, z.im)).unzip()
}

/// Two real sample arrays analysed with a single complex transform.
pub(crate) fn forward_pair(x: &[f64], y: &[f64], grid: &Grid3) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut data: Vec<Complex64> = x.iter().zip(y).map(|(&a, &b)| Complex64::new(a, b)).collect();
    forward_in_place(grid, &mut data);
    let half_i = Complex64::new(0.0, -0.5);
    let t = GridTables::get(grid);
    (0..data.len())
        .map(|k| {
            let z = data[k];
            let zm = data[t.mirror[k]].conj();
            (0.5 * (z + zm), half_i * (z - zm))
        })
        .unzip()
}

/// Three Fourier-coefficient arrays on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    components: [SpectralScalarField; 3],
    /// Set by constructors that guarantee `k . v̂ = 0` mode by mode.
    pub div_free: bool,
}

impl SpectralVectorField {
    pub fn zeros(grid: Grid3) -> Self {
        Self {
            components: std::array::from_fn(|_| SpectralScalarField::zeros(grid)),
            div_free: true,
        }
    }

    pub fn new(components: [SpectralScalarField; 3]) -> Result<Self> {
        let g = components[0].grid;
        if components.iter().any(|c| c.grid != g) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            components,
            div_free: false,
        })
    }

    pub(crate) fn from_parts(components: [SpectralScalarField; 3], div_free: bool) -> Self {
        Self {
            components,
            div_free,
        }
    }

    pub fn grid(&self) -> &Grid3 {
        &self.components[0].grid
    }

    pub fn components(&self) -> &[SpectralScalarField; 3] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &SpectralScalarField {
        &self.components[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut SpectralScalarField {
        &mut self.components[i]
    }

    pub fn into_components(self) -> [SpectralScalarField; 3] {
        self.components
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            components: std::array::from_fn(|i| self.components[i].scaled(c)),
            div_free: self.div_free,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = Vec::with_capacity(3);
        for i in 0..3 {
            out.push(self.components[i].sub(&other.components[i])?);
        }
        let components: [SpectralScalarField; 3] = out.try_into().expect("three components");
        Ok(Self {
            components,
            div_free: self.div_free && other.div_free,
        })
    }

    pub fn l2_sq(&self) -> f64 {
        self.components.iter().map(|c| c.l2_sq()).sum()
    }

    /// `Σ_i ∫ v_i conj(w_i) dx`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        (0..3)
            .map(|i| self.components[i].inner(&other.components[i]))
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    /// `max_m |k.v̂(m)|` using derivative wavenumbers.
    pub fn divergence_max(&self) -> f64 {
        let g = *self.grid();
        let w = g.wavenumbers();
        let mut worst: f64 = 0.0;
        for i3 in 0..g.n_v {
            for i2 in 0..g.n_h {
                for i1 in 0..g.n_h {
                    let idx = g.index(i1, i2, i3);
                    let d = w.deriv(i1, i2, i3);
                    let div = self.components[0].coeffs[idx] * d[0]
                        + self.components[1].coeffs[idx] * d[1]
                        + self.components[2].coeffs[idx] * d[2];
                    worst = worst.max(div.norm());
                }
            }
        }
        worst
    }

    /// `max|k.v̂| / max|v̂|`, zero for the zero field.
    pub fn divergence_defect(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            0.0
        } else {
            self.divergence_max() / m
        }
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.hermitian_defect())
            .fold(0.0, f64::max)
    }

    /// Physical-space samples of all three components.
    pub fn to_physical(&self) -> [Vec<f64>; 3] {
        let g = self.grid();
        let (a, b) = inverse_pair(&self.components[0].coeffs, &self.components[1].coeffs, g);
        let c = inverse_transform(&self.components[2]);
        [a, b, c]
    }

    /// `max_x |v(x)|` over grid points (grid approximation of the sup norm).
    pub fn linf(&self) -> f64 {
        let [a, b, c] = self.to_physical();
        a.iter()
            .zip(&b)
            .zip(&c)
            .map(|((x, y), z)| (x * x + y * y + z * z).sqrt())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::random_real_field;

    #[test]
    fn zero_field_transforms_to_zero() {
        let g = Grid3::cube(8).unwrap();
        let f = forward_transform(&vec![0.0; g.len()], &g).unwrap();
        assert!(f.coeffs().iter().all(|z| *z == Complex64::default()));
    }

    #[test]
    fn cosine_is_one_conjugate_pair() {
        let g = Grid3::new(8, 8, 2.0, 3.0).unwrap();
        let w = g.wavenumbers();
        let mut samples = vec![0.0; g.len()];
        for i3 in 0..g.n_v {
            for i2 in 0..g.n_h {
                for i1 in 0..g.n_h {
                    let x2 = i2 as f64 * g.l_h / g.n_h as f64;
                    samples[g.index(i1, i2, i3)] = (w.k2[3] * x2).cos();
                }
            }
        }
        let f = forward_transform(&samples, &g).unwrap();
        let nonzero: Vec<usize> = (0..g.len()).filter(|&i| f.coeffs()[i].norm() > 1e-12).collect();
        assert_eq!(nonzero, vec![g.index(0, 3, 0), g.index(0, 5, 0)]);
        assert!((f.coeffs()[g.index(0, 3, 0)] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let g = Grid3::cube(8).unwrap();
        assert!(matches!(
            forward_transform(&[1.0; 10], &g),
            Err(Error::DimensionMismatch { expected: 512, actual: 10 })
        ));
    }

    #[test]
    fn round_trip_and_plancherel() {
        let g = Grid3::new(16, 8, 5.0, 2.0).unwrap();
        let (samples, f) = random_real_field(&g, 11);
        let back = inverse_transform(&f);
        let err = samples
            .iter()
            .zip(&back)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm = samples.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!(err / norm <= 1e-12);

        let physical = samples.iter().map(|a| a * a).sum::<f64>() * g.cell_volume();
        assert!((physical - f.l2_sq()).abs() <= 1e-12 * physical);

        let imag = inverse_transform_complex(&f)
            .iter()
            .map(|z| z.im.abs())
            .fold(0.0, f64::max);
        assert!(imag <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn paired_transforms_match_single_ones() {
        let g = Grid3::new(8, 10, 1.0, 2.0).unwrap();
        let (x, fx) = random_real_field(&g, 1);
        let (y, fy) = random_real_field(&g, 2);
        let (a, b) = forward_pair(&x, &y, &g);
        for k in 0..g.len() {
            assert!((a[k] - fx.coeffs()[k]).norm() < 1e-14);
            assert!((b[k] - fy.coeffs()[k]).norm() < 1e-14);
        }
        let (px, py) = inverse_pair(fx.coeffs(), fy.coeffs(), &g);
        for k in 0..g.len() {
            assert!((px[k] - x[k]).abs() < 1e-12);
            assert!((py[k] - y[k]).abs() < 1e-12);
        }
    }
}
