use rustfft::num_complex::Complex64;

use crate::spectral::{
    advection_from_products, products, Dealias, Products, SpectralScalarField, SpectralVectorField,
};

#[inline]
fn times_i(z: Complex64) -> Complex64 {
    Complex64::new(-z.im, z.re)
}

/// `p̂ = -Σ_{j,m} k_j k_m (v^j v^m)^ / |k|²` with zero mean.
pub fn pressure_field(v: &SpectralVectorField, rule: Dealias) -> SpectralScalarField {
    pressure_from_products(&products(v, rule))
}

pub(crate) fn pressure_from_products(p: &Products) -> SpectralScalarField {
    let g = *p.grid();
    let mut out = vec![Complex64::default(); g.len()];
    p.for_each(|pos, idx, d| {
        let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        if d2 == 0.0 {
            return;
        }
        let mut s = Complex64::default();
        for j in 0..3 {
            for m in 0..3 {
                s += p.get(j, m, pos) * (d[j] * d[m]);
            }
        }
        out[idx] = -s / d2;
    });
    SpectralScalarField::from_coeffs(g, out).expect("grid-sized array")
}

/// Duhamel kernels of `v³`, written over `f1` and `f2`:
///
/// ```text
/// F1 = -i |k_h|² / |k|² Σ_j k_j (v^j v³)^
/// F2 =  i k3 / |k|² Σ_j Σ_{m<=2} k_j k_m (v^j v^m)^
/// ```
pub(crate) fn kernels_into(p: &Products, f1: &mut [Complex64], f2: &mut [Complex64]) {
    let zero = Complex64::default();
    f1.fill(zero);
    f2.fill(zero);
    p.for_each(|pos, idx, d| {
        let dh2 = d[0] * d[0] + d[1] * d[1];
        let d2 = dh2 + d[2] * d[2];
        if d2 == 0.0 {
            return;
        }
        let s3 = p.get(0, 2, pos) * d[0] + p.get(1, 2, pos) * d[1] + p.get(2, 2, pos) * d[2];
        let mut sh = zero;
        for j in 0..3 {
            for m in 0..2 {
                sh += p.get(j, m, pos) * (d[j] * d[m]);
            }
        }
        f1[idx] = -times_i(s3) * (dh2 / d2);
        f2[idx] = times_i(sh) * (d[2] / d2);
    });
}

/// `(F1, F2)` at the state `v`.
pub fn duhamel_kernels(v: &SpectralVectorField, rule: Dealias) -> (SpectralScalarField, SpectralScalarField) {
    let g = *v.grid();
    let p = products(v, rule);
    let mut f1 = vec![Complex64::default(); g.len()];
    let mut f2 = vec![Complex64::default(); g.len()];
    kernels_into(&p, &mut f1, &mut f2);
    (
        SpectralScalarField::from_coeffs(g, f1).expect("grid-sized array"),
        SpectralScalarField::from_coeffs(g, f2).expect("grid-sized array"),
    )
}

/// Residuals of the two Fourier-side identities, relative to the largest coefficient of
/// the advection term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityDefects {
    /// `max|-P(v.∇v) + (v.∇v)^ + i k p̂|`
    pub pressure: f64,
    /// `max|F1 + F2 + (v.∇v³)^ + i k3 p̂|`
    pub kernels: f64,
}

pub fn identity_defects(v: &SpectralVectorField, rule: Dealias) -> IdentityDefects {
    let p = products(v, rule);
    let g = *v.grid();
    let adv = advection_from_products(&p);
    let pr = pressure_from_products(&p);
    let nl = crate::spectral::nonlinear_from_products(&p);
    let mut f1 = vec![Complex64::default(); g.len()];
    let mut f2 = vec![Complex64::default(); g.len()];
    kernels_into(&p, &mut f1, &mut f2);
    let w = g.wavenumbers();
    let scale = adv
        .iter()
        .flat_map(|c| c.iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    let (mut dp, mut dk) = (0.0f64, 0.0f64);
    for idx in 1..g.len() {
        let [i1, i2, i3] = g.unravel(idx);
        let d = w.deriv(i1, i2, i3);
        let ph = pr.coeffs()[idx];
        for i in 0..3 {
            let r = nl.component(i).coeffs()[idx] + adv[i][idx] + times_i(ph * d[i]);
            dp = dp.max(r.norm());
        }
        let r = f1[idx] + f2[idx] + adv[2][idx] + times_i(ph * d[2]);
        dk = dk.max(r.norm());
    }
    let rel = |x: f64| if scale > 0.0 { x / scale } else { x };
    IdentityDefects {
        pressure: rel(dp),
        kernels: rel(dk),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{mode_storage_index, Grid3};
    use crate::testing::{band_limited_div_free, random_div_free, taylor_green};

    #[test]
    fn zero_field() {
        let g = Grid3::cube(16).unwrap();
        let v = SpectralVectorField::zeros(g);
        assert_eq!(pressure_field(&v, Dealias::TwoThirds).max_abs(), 0.0);
        let (f1, f2) = duhamel_kernels(&v, Dealias::TwoThirds);
        assert_eq!(f1.max_abs() + f2.max_abs(), 0.0);
    }

    #[test]
    fn taylor_green_pressure() {
        // p = A²/4 (cos 2x1 + cos 2x2)
        let g = Grid3::cube(16).unwrap();
        let a = 0.7;
        let v = taylor_green(&g, a);
        let p = pressure_field(&v, Dealias::TwoThirds);
        let mut expected = SpectralScalarField::zeros(g);
        for m in [[2, 0, 0], [-2, 0, 0], [0, 2, 0], [0, -2, 0]] {
            expected.coeffs_mut()[mode_storage_index(&g, m)] = Complex64::new(a * a / 8.0, 0.0);
        }
        assert!(p.sub(&expected).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn kernel_vanishes_without_v3() {
        let g = Grid3::cube(16).unwrap();
        let v = band_limited_div_free(&g, 2, 1.0);
        // Horizontal 2D flow: v³ = 0 and no x3 dependence.
        let mut w = v.clone();
        for i in 0..3 {
            for (idx, c) in w.component_mut(i).coeffs_mut().iter_mut().enumerate() {
                if i == 2 || g.unravel(idx)[2] != 0 {
                    *c = Complex64::default();
                }
            }
        }
        let (f1, _) = duhamel_kernels(&w, Dealias::TwoThirds);
        // Packed product transforms leave round-off in (v^j v³)^.
        let scale = pressure_field(&w, Dealias::TwoThirds).max_abs();
        assert!(f1.max_abs() < 1e-14 * scale, "{} vs {scale}", f1.max_abs());
    }

    #[test]
    fn identities_on_random_data() {
        let g = Grid3::new(16, 8, 9.0, 3.0).unwrap();
        for (seed, rule) in [(1, Dealias::TwoThirds), (2, Dealias::None)] {
            let v = random_div_free(&g, seed);
            let d = identity_defects(&v, rule);
            assert!(d.pressure < 1e-10, "{d:?}");
            assert!(d.kernels < 1e-10, "{d:?}");
        }
    }
}
