use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::{BlockDirection, DyadicFilterBank};
use crate::spectral::{Grid3, SpectralScalarField, SpectralVectorField};

/// Anything normed component-wise: a scalar field or the three components of a vector
/// field (Euclidean combination).
pub trait NormInput {
    fn grid(&self) -> &Grid3;
    fn parts(&self) -> Vec<&SpectralScalarField>;
}

impl NormInput for SpectralScalarField {
    fn grid(&self) -> &Grid3 {
        SpectralScalarField::grid(self)
    }
    fn parts(&self) -> Vec<&SpectralScalarField> {
        vec![self]
    }
}

impl NormInput for SpectralVectorField {
    fn grid(&self) -> &Grid3 {
        SpectralVectorField::grid(self)
    }
    fn parts(&self) -> Vec<&SpectralScalarField> {
        self.components().iter().collect()
    }
}

/// What happens to a singular plane (`k_h = 0` for `s_h < 0`, `k_3 = 0` for `s_v < 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularPolicy {
    /// Drop the plane and report its `L²` mass.
    #[default]
    Exclude,
    /// Error if the plane carries any mass.
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NormSpec {
    AnisoSobolev {
        s_h: f64,
        s_v: f64,
        #[serde(default)]
        policy: SingularPolicy,
    },
    B0half,
    L2,
    MixedLebesgue {
        p_h: f64,
        q_v: f64,
    },
}

impl NormSpec {
    pub fn evaluate<F: NormInput>(&self, a: &F) -> Result<NormValue> {
        match *self {
            NormSpec::AnisoSobolev { s_h, s_v, policy } => {
                let v = aniso_sobolev_norm(a, s_h, s_v)?;
                if policy == SingularPolicy::Reject && v.excluded_l2_sq > 0.0 {
                    return Err(Error::param(
                        "policy",
                        format!("singular planes carry L² mass {:e}", v.excluded_l2_sq),
                    ));
                }
                Ok(v)
            }
            NormSpec::B0half => {
                let bank = DyadicFilterBank::for_grid(*a.grid(), BlockDirection::Vertical)?;
                Ok(NormValue::plain(b0half_norm(a, &bank)?))
            }
            NormSpec::L2 => Ok(NormValue::plain(l2_norm(a))),
            NormSpec::MixedLebesgue { p_h, q_v } => {
                Ok(NormValue::plain(super::lebesgue::mixed_lebesgue_norm(a, p_h, q_v)?))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    pub squared: f64,
    /// Squared `L²` mass on the excluded singular planes.
    pub excluded_l2_sq: f64,
}

impl NormValue {
    fn plain(value: f64) -> Self {
        Self {
            value,
            squared: value * value,
            excluded_l2_sq: 0.0,
        }
    }
}

pub fn l2_norm<F: NormInput>(a: &F) -> f64 {
    a.parts().iter().map(|c| c.l2_sq()).sum::<f64>().sqrt()
}

/// `Ḣ^{s_h, s_v}`: `V Σ |k_h|^{2 s_h} |k_3|^{2 s_v} |â|²`. A negative index drops the
/// corresponding zero plane; a zero index keeps it (`0^0 = 1`).
pub fn aniso_sobolev_norm<F: NormInput>(a: &F, s_h: f64, s_v: f64) -> Result<NormValue> {
    if !s_h.is_finite() {
        return Err(Error::param("s_h", format!("{s_h} is not finite")));
    }
    if !s_v.is_finite() {
        return Err(Error::param("s_v", format!("{s_v} is not finite")));
    }
    let g = *a.grid();
    let w = g.wavenumbers();
    let wh: Vec<Option<f64>> = (0..g.n_h * g.n_h)
        .map(|i| weight(w.kh_sq(i % g.n_h, i / g.n_h), s_h))
        .collect();
    let wv: Vec<Option<f64>> = w.k3.iter().map(|k| weight(k * k, s_v)).collect();
    let plane = g.n_h * g.n_h;
    let (mut sum, mut excluded) = (0.0, 0.0);
    for part in a.parts() {
        for (idx, z) in part.coeffs().iter().enumerate() {
            let e = z.norm_sqr();
            match (wh[idx % plane], wv[idx / plane]) {
                (Some(x), Some(y)) => sum += x * y * e,
                _ => excluded += e,
            }
        }
    }
    let vol = g.volume();
    let squared = vol * sum;
    Ok(NormValue {
        value: squared.sqrt(),
        squared,
        excluded_l2_sq: vol * excluded,
    })
}

/// `|k|^{2s}` from `|k|²`; `None` on the singular point of a negative power.
#[inline]
pub(crate) fn weight(k_sq: f64, s: f64) -> Option<f64> {
    if s == 0.0 {
        Some(1.0)
    } else if k_sq == 0.0 {
        if s < 0.0 {
            None
        } else {
            Some(0.0)
        }
    } else {
        Some(k_sq.powf(s))
    }
}

/// `Σ_{ℓ=j_min}^{j_max} 2^{ℓ/2} ‖Δ_ℓ^v a‖ + 2^{j_min/2} ‖S_{j_min}^v a‖`.
pub fn b0half_norm<F: NormInput>(a: &F, bank: &DyadicFilterBank) -> Result<f64> {
    if bank.direction() != BlockDirection::Vertical {
        return Err(Error::param("bank", "B^{0,1/2} needs a vertical bank"));
    }
    let g = *a.grid();
    bank.check_grid(&g)?;
    let mut per_plane = vec![0.0; g.n_v];
    let plane = g.n_h * g.n_h;
    for part in a.parts() {
        for (i3, chunk) in part.coeffs().chunks(plane).enumerate() {
            per_plane[i3] += chunk.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
    }
    Ok(b0half_from_planes(bank, &g, &per_plane))
}

/// `B^{0,1/2}` from the energy `Σ_{k_h} |â|²` of each vertical plane.
pub(crate) fn b0half_from_planes(bank: &DyadicFilterBank, g: &Grid3, per_plane: &[f64]) -> f64 {
    let w = g.wavenumbers();
    let vol = g.volume();
    bank.block_indices()
        .into_iter()
        .map(|j| {
            let e: f64 = per_plane
                .iter()
                .zip(&w.k3)
                .map(|(e, k)| {
                    let b = bank.block_weight(j, k.abs());
                    b * b * e
                })
                .sum();
            let label = j.max(bank.j_min());
            2f64.powf(0.5 * label as f64) * (vol * e).sqrt()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::cutoff::phi;
    use crate::spectral::derivative;
    use crate::testing::{random_div_free, random_real_field};
    use proptest::prelude::*;
    use rustfft::num_complex::Complex64;

    #[test]
    fn zero_indices_give_l2() {
        let g = Grid3::new(16, 8, 3.0, 5.0).unwrap();
        let v = random_div_free(&g, 3);
        let n = aniso_sobolev_norm(&v, 0.0, 0.0).unwrap();
        assert!((n.value - l2_norm(&v)).abs() <= 1e-12 * n.value);
        assert_eq!(n.excluded_l2_sq, 0.0);
    }

    #[test]
    fn single_mode_one_term_sum() {
        let g = Grid3::cube(16).unwrap();
        let c = Complex64::new(0.3, -0.4);
        let a = SpectralScalarField::single_mode(g, [2, 0, 3], c);
        let n = aniso_sobolev_norm(&a, 1.0, 0.5).unwrap();
        // two conjugate coefficients of modulus |c| on a (2π)^3 box
        let amp = (2.0 * g.volume()).sqrt() * c.norm();
        assert!((n.value - amp * 2.0 * 3f64.sqrt()).abs() <= 1e-12 * n.value);
    }

    #[test]
    fn negative_indices_report_excluded_planes() {
        let g = Grid3::cube(8).unwrap();
        let a = SpectralScalarField::single_mode(g, [0, 0, 2], Complex64::new(1.0, 0.0));
        let n = aniso_sobolev_norm(&a, -0.5, 0.0).unwrap();
        assert_eq!(n.value, 0.0);
        assert!((n.excluded_l2_sq - a.l2_sq()).abs() <= 1e-14);
        let n = aniso_sobolev_norm(&a, 0.5, -0.25).unwrap();
        assert_eq!(n.value, 0.0);
        assert_eq!(n.excluded_l2_sq, 0.0);
        assert!(aniso_sobolev_norm(&a, f64::NAN, 0.0).is_err());
        let spec = NormSpec::AnisoSobolev { s_h: -0.5, s_v: 0.0, policy: SingularPolicy::Reject };
        assert!(spec.evaluate(&a).is_err());
    }

    #[test]
    fn b0half_on_single_vertical_modes() {
        let g = Grid3::cube(32).unwrap();
        let bank = DyadicFilterBank::for_grid(g, BlockDirection::Vertical).unwrap();
        assert_eq!(b0half_norm(&SpectralScalarField::zeros(g), &bank).unwrap(), 0.0);
        // |k3| = 3 = 1.5 * 2^1 sits in block 1 only, with weight 1.
        let a = SpectralScalarField::single_mode(g, [1, 2, 3], Complex64::new(0.2, 0.1));
        let b = b0half_norm(&a, &bank).unwrap();
        assert!((b - 2f64.sqrt() * a.l2() * phi(1.5)).abs() <= 1e-12 * b);
        // |k3| = 4 = 2^2 splits between blocks 1 and 2.
        let a = SpectralScalarField::single_mode(g, [0, 1, 4], Complex64::new(0.2, 0.1));
        let want = (2f64.sqrt() * phi(2.0) + 2.0 * phi(1.0)) * a.l2();
        assert!((b0half_norm(&a, &bank).unwrap() - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn holder_interpolation_of_vertical_derivative() {
        let g = Grid3::new(16, 16, 4.0, 6.0).unwrap();
        for seed in 0..5 {
            let (_, a) = random_real_field(&g, seed);
            let d3 = derivative(&a, 2);
            for s in [1.0, 1.5, 2.0, 3.0] {
                let lhs = aniso_sobolev_norm(&d3, s - 1.0, 0.0).unwrap().value;
                let x = aniso_sobolev_norm(&a, s, 0.0).unwrap().value;
                let y = aniso_sobolev_norm(&a, 0.0, s).unwrap().value;
                let rhs = x.powf((s - 1.0) / s) * y.powf(1.0 / s);
                assert!(lhs <= rhs * (1.0 + 1e-12), "s = {s}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn norms_are_homogeneous_and_subadditive(
            seed in 0u64..1000,
            lambda in -3.0f64..3.0,
            s_h in -0.9f64..1.5,
            s_v in -0.7f64..1.5,
        ) {
            let g = Grid3::new(8, 8, 5.0, 3.0).unwrap();
            let bank = DyadicFilterBank::for_grid(g, BlockDirection::Vertical).unwrap();
            let a = random_div_free(&g, seed);
            let b = random_div_free(&g, seed + 7);
            let sum = SpectralVectorField::new([0, 1, 2].map(|i| a.component(i).add(b.component(i)).unwrap())).unwrap();
            let n = |f: &SpectralVectorField| aniso_sobolev_norm(f, s_h, s_v).unwrap().value;
            prop_assert!((n(&a.scaled(lambda)) - lambda.abs() * n(&a)).abs() <= 1e-12 * n(&a).max(1e-300) * lambda.abs().max(1.0));
            prop_assert!(n(&sum) <= (n(&a) + n(&b)) * (1.0 + 1e-12));
            let bz = |f: &SpectralVectorField| b0half_norm(f, &bank).unwrap();
            prop_assert!((bz(&a.scaled(lambda)) - lambda.abs() * bz(&a)).abs() <= 1e-12 * bz(&a) * lambda.abs().max(1.0));
            prop_assert!(bz(&sum) <= (bz(&a) + bz(&b)) * (1.0 + 1e-12));
        }
    }
}
