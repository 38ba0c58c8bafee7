use log::warn;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{SpectralScalarField, SpectralVectorField};
use super::grid::Grid3;
use super::tables::GridTables;
use crate::error::{Error, Result};

/// `∂_j a`, i.e. multiplication by `i k_j` (derivative wavenumbers, Nyquist zeroed).
pub fn derivative(a: &SpectralScalarField, axis: usize) -> SpectralScalarField {
    assert!(axis < 3, "axis must be 0, 1 or 2");
    let g = *a.grid();
    let w = g.wavenumbers();
    let mut out = a.clone();
    let c = out.coeffs_mut();
    for i3 in 0..g.n_v {
        for i2 in 0..g.n_h {
            for i1 in 0..g.n_h {
                let idx = g.index(i1, i2, i3);
                let k = w.deriv(i1, i2, i3)[axis];
                c[idx] *= Complex64::new(0.0, k);
            }
        }
    }
    out
}

pub fn divergence(v: &SpectralVectorField) -> SpectralScalarField {
    let g = *v.grid();
    let w = g.wavenumbers();
    let mut out = SpectralScalarField::zeros(g);
    let [a, b, c] = v.components();
    let o = out.coeffs_mut();
    for i3 in 0..g.n_v {
        for i2 in 0..g.n_h {
            for i1 in 0..g.n_h {
                let idx = g.index(i1, i2, i3);
                let d = w.deriv(i1, i2, i3);
                o[idx] = Complex64::new(0.0, 1.0)
                    * (a.coeffs()[idx] * d[0] + b.coeffs()[idx] * d[1] + c.coeffs()[idx] * d[2]);
            }
        }
    }
    out
}

/// Per-mode Leray projector `I - k k^T / |k|^2`; the zero mode is set to zero.
pub fn leray_project(v: &SpectralVectorField) -> SpectralVectorField {
    let mut out = v.clone();
    leray_in_place(&mut out);
    out
}

pub(crate) fn leray_in_place(v: &mut SpectralVectorField) {
    let g = *v.grid();
    let t = GridTables::get(&g);
    let w = &t.waves;
    let mut comps = std::mem::replace(v, SpectralVectorField::zeros(g)).into_components();
    {
        let [a, b, c] = &mut comps;
        let (a, b, c) = (a.coeffs_mut(), b.coeffs_mut(), c.coeffs_mut());
        for i3 in 0..g.n_v {
            for i2 in 0..g.n_h {
                for i1 in 0..g.n_h {
                    let idx = g.index(i1, i2, i3);
                    if idx == 0 {
                        a[0] = Complex64::default();
                        b[0] = Complex64::default();
                        c[0] = Complex64::default();
                        continue;
                    }
                    let d = w.deriv(i1, i2, i3);
                    let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                    if d2 == 0.0 {
                        continue;
                    }
                    let proj = (a[idx] * d[0] + b[idx] * d[1] + c[idx] * d[2]) / d2;
                    a[idx] -= proj * d[0];
                    b[idx] -= proj * d[1];
                    c[idx] -= proj * d[2];
                }
            }
        }
    }
    *v = SpectralVectorField::from_parts(comps, true);
}

/// Zero every mode outside the per-axis 2/3 band `3|m_i| < n_i`.
pub fn dealias(a: &SpectralScalarField) -> SpectralScalarField {
    let mut out = a.clone();
    truncate_coeffs(a.grid(), out.coeffs_mut());
    out
}

pub(crate) fn truncate_coeffs(g: &Grid3, c: &mut [Complex64]) {
    let t = GridTables::get(g);
    let w = &t.waves;
    for i3 in 0..g.n_v {
        for i2 in 0..g.n_h {
            for i1 in 0..g.n_h {
                if !w.in_band(i1, i2, i3) {
                    c[g.index(i1, i2, i3)] = Complex64::default();
                }
            }
        }
    }
}

/// Fourier multipliers used by the solver and the diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum MultiplierSpec {
    /// `e^{-t |k_h|^2}`; equals 1 on the plane `k_h = 0`.
    HorizontalHeat { t: f64 },
    /// `e^{-t |k|^2}`.
    FullHeat { t: f64 },
    /// `|k_h|^sigma`; for `sigma < 0` the plane `k_h = 0` is mapped to zero.
    HorizontalPower { sigma: f64 },
    /// `|k|^{-2}`; the zero mode is mapped to zero.
    InverseLaplacian,
    /// `i k_j`.
    Derivative { axis: usize },
}

/// Result of [`apply_multiplier`]; `excluded_l2_sq` is the squared L² mass of the input
/// on the singular set that was mapped to zero.
#[derive(Debug, Clone)]
pub struct Applied {
    pub field: SpectralScalarField,
    pub excluded_l2_sq: f64,
}

pub fn apply_multiplier(a: &SpectralScalarField, spec: &MultiplierSpec) -> Result<Applied> {
    match *spec {
        MultiplierSpec::HorizontalHeat { t } | MultiplierSpec::FullHeat { t } => {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::param("t", format!("heat time must be finite and >= 0, got {t}")));
            }
        }
        MultiplierSpec::HorizontalPower { sigma } => {
            if !sigma.is_finite() {
                return Err(Error::param("sigma", "must be finite"));
            }
        }
        MultiplierSpec::Derivative { axis } => {
            if axis > 2 {
                return Err(Error::param("axis", format!("{axis} is not 0, 1 or 2")));
            }
            return Ok(Applied {
                field: derivative(a, axis),
                excluded_l2_sq: 0.0,
            });
        }
        MultiplierSpec::InverseLaplacian => {}
    }

    let g = *a.grid();
    let w = g.wavenumbers();
    let mut out = a.clone();
    let mut excluded = 0.0;
    let c = out.coeffs_mut();
    for i3 in 0..g.n_v {
        for i2 in 0..g.n_h {
            for i1 in 0..g.n_h {
                let idx = g.index(i1, i2, i3);
                let kh2 = w.kh_sq(i1, i2);
                let k2 = kh2 + w.k3[i3] * w.k3[i3];
                let symbol = match *spec {
                    MultiplierSpec::HorizontalHeat { t } => (-t * kh2).exp(),
                    MultiplierSpec::FullHeat { t } => (-t * k2).exp(),
                    MultiplierSpec::HorizontalPower { sigma } => {
                        if kh2 == 0.0 && sigma < 0.0 {
                            excluded += c[idx].norm_sqr();
                            0.0
                        } else {
                            kh2.powf(0.5 * sigma)
                        }
                    }
                    MultiplierSpec::InverseLaplacian => {
                        if k2 == 0.0 {
                            excluded += c[idx].norm_sqr();
                            0.0
                        } else {
                            1.0 / k2
                        }
                    }
                    MultiplierSpec::Derivative { .. } => unreachable!(),
                };
                c[idx] *= symbol;
            }
        }
    }
    let excluded_l2_sq = excluded * g.volume();
    if excluded_l2_sq > 0.0 {
        warn!("{spec:?}: input carries squared L2 mass {excluded_l2_sq:e} on the singular set; mapped to zero");
    }
    Ok(Applied {
        field: out,
        excluded_l2_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::mode_storage_index;
    use crate::testing::{random_real_field, random_vector_field};

    #[test]
    fn derivative_scales_single_mode() {
        let g = Grid3::new(8, 8, 4.0, 2.0).unwrap();
        let f = SpectralScalarField::single_mode(g, [1, -2, 3], Complex64::new(0.3, -0.7));
        let w = g.wavenumbers();
        let idx = mode_storage_index(&g, [1, -2, 3]);
        let [i1, i2, i3] = g.unravel(idx);
        for axis in 0..3 {
            let d = derivative(&f, axis);
            let k = w.deriv(i1, i2, i3)[axis];
            assert!((d.coeffs()[idx] - Complex64::new(0.0, k) * f.coeffs()[idx]).norm() < 1e-15);
            assert!(d.hermitian_defect() < 1e-15);
        }
    }

    #[test]
    fn constant_has_zero_derivative() {
        let g = Grid3::cube(8).unwrap();
        let f = forward_transform_const(&g, 2.5);
        for axis in 0..3 {
            assert_eq!(derivative(&f, axis).max_abs(), 0.0);
        }
    }

    fn forward_transform_const(g: &Grid3, c: f64) -> SpectralScalarField {
        crate::spectral::forward_transform(&vec![c; g.len()], g).unwrap()
    }

    #[test]
    fn leray_annihilates_gradients() {
        let g = Grid3::new(8, 10, 3.0, 2.0).unwrap();
        let (_, phi) = random_real_field(&g, 5);
        let grad = SpectralVectorField::new(std::array::from_fn(|j| derivative(&phi, j))).unwrap();
        let p = leray_project(&grad);
        assert!(p.max_abs() <= 1e-14 * grad.max_abs());
    }

    #[test]
    fn leray_is_idempotent_and_kills_divergence() {
        let g = Grid3::new(16, 8, 7.0, 2.0).unwrap();
        let v = random_vector_field(&g, 9);
        let p = leray_project(&v);
        assert!(p.divergence_max() <= 1e-12 * v.max_abs());
        assert_eq!(p.component(0).coeffs()[0], Complex64::default());
        let pp = leray_project(&p);
        let diff = pp.sub(&p).unwrap().max_abs();
        assert!(diff <= 1e-12 * p.max_abs());
        assert!(divergence(&p).max_abs() <= 1e-12 * v.max_abs());
        assert!(p.hermitian_defect() < 1e-14);
    }

    #[test]
    fn horizontal_heat_identities() {
        let g = Grid3::cube(8).unwrap();
        let (_, a) = random_real_field(&g, 3);
        let same = apply_multiplier(&a, &MultiplierSpec::HorizontalHeat { t: 0.0 }).unwrap();
        assert_eq!(same.field, a);

        let m = SpectralScalarField::single_mode(g, [1, 0, 2], Complex64::new(1.0, 0.0));
        let h = apply_multiplier(&m, &MultiplierSpec::HorizontalHeat { t: 1.0 }).unwrap();
        let idx = mode_storage_index(&g, [1, 0, 2]);
        assert!((h.field.coeffs()[idx].re - (-1.0f64).exp()).abs() < 1e-15);

        let vertical = SpectralScalarField::single_mode(g, [0, 0, 3], Complex64::new(1.0, 0.0));
        let h = apply_multiplier(&vertical, &MultiplierSpec::HorizontalHeat { t: 5.0 }).unwrap();
        assert_eq!(h.field, vertical);

        assert!(apply_multiplier(&a, &MultiplierSpec::HorizontalHeat { t: -1.0 }).is_err());
        assert!(apply_multiplier(&a, &MultiplierSpec::HorizontalPower { sigma: f64::NAN }).is_err());
    }

    #[test]
    fn negative_power_reports_singular_mass() {
        let g = Grid3::cube(8).unwrap();
        let vertical = SpectralScalarField::single_mode(g, [0, 0, 1], Complex64::new(1.0, 0.0));
        let out = apply_multiplier(&vertical, &MultiplierSpec::HorizontalPower { sigma: -0.5 }).unwrap();
        assert_eq!(out.field.max_abs(), 0.0);
        assert!((out.excluded_l2_sq - vertical.l2_sq()).abs() < 1e-12);

        let m = SpectralScalarField::single_mode(g, [3, 4, 1], Complex64::new(1.0, 0.0));
        let out = apply_multiplier(&m, &MultiplierSpec::HorizontalPower { sigma: -1.0 }).unwrap();
        assert_eq!(out.excluded_l2_sq, 0.0);
        assert!((out.field.l2() - m.l2() / 5.0).abs() < 1e-14);
    }
}
