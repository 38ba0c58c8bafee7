use rustfft::num_complex::Complex64;
use serde::Serialize;

use super::bank::{BlockDirection, BlockKind, DyadicFilterBank};
use super::bony::physical_product;
use crate::error::Result;
use crate::spectral::{derivative, inverse_transform, SpectralScalarField};

/// `[Δ_ℓ; f] g = Δ_ℓ(f g) - f Δ_ℓ g`.
///
/// The commutator ignores the mean of `f`, which is removed first so a constant `f`
/// gives exactly zero.
pub fn dyadic_commutator(
    bank: &DyadicFilterBank,
    ell: i32,
    f: &SpectralScalarField,
    g: &SpectralScalarField,
) -> Result<SpectralScalarField> {
    bank.check_grid(f.grid())?;
    bank.check_grid(g.grid())?;
    let mut f0 = f.clone();
    f0.coeffs_mut()[0] = Complex64::default();
    let fg = physical_product(&f0, g)?;
    let lhs = bank.dyadic_block(&fg, BlockKind::Delta, ell)?;
    let rhs = physical_product(&f0, &bank.dyadic_block(g, BlockKind::Delta, ell)?)?;
    lhs.sub(&rhs)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CommutatorSample {
    pub ell: i32,
    pub commutator_l2: f64,
    /// `‖∂ f‖_∞` in the bank's direction (`|∇_h f|` or `|∂_3 f|`).
    pub grad_f_inf: f64,
    pub g_l2: f64,
    /// `‖[Δ_ℓ; f] g‖ / (2^{-ℓ} ‖∂ f‖_∞ ‖g‖)`.
    pub ratio: f64,
}

pub fn commutator_ratio(
    bank: &DyadicFilterBank,
    ell: i32,
    f: &SpectralScalarField,
    g: &SpectralScalarField,
) -> Result<CommutatorSample> {
    let c = dyadic_commutator(bank, ell, f, g)?;
    let grad_f_inf = match bank.direction() {
        BlockDirection::Horizontal => {
            let a = inverse_transform(&derivative(f, 0));
            let b = inverse_transform(&derivative(f, 1));
            a.iter().zip(&b).map(|(x, y)| x.hypot(*y)).fold(0.0, f64::max)
        }
        BlockDirection::Vertical => inverse_transform(&derivative(f, 2))
            .iter()
            .fold(0.0, |m: f64, x| m.max(x.abs())),
    };
    let commutator_l2 = c.l2();
    let g_l2 = g.l2();
    let scale = 2f64.powi(-ell) * grad_f_inf * g_l2;
    Ok(CommutatorSample {
        ell,
        commutator_l2,
        grad_f_inf,
        g_l2,
        ratio: if scale > 0.0 { commutator_l2 / scale } else { 0.0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid3;
    use crate::testing::random_real_field;
    use std::f64::consts::PI;

    #[test]
    fn constant_f_and_zero_g_give_zero() {
        let g = Grid3::cube(16).unwrap();
        let bank = DyadicFilterBank::for_grid(g, BlockDirection::Vertical).unwrap();
        let mut f = SpectralScalarField::zeros(g);
        f.coeffs_mut()[0] = Complex64::new(-3.0, 0.0);
        let (_, h) = random_real_field(&g, 4);
        for ell in bank.j_min()..=bank.j_max() {
            assert_eq!(dyadic_commutator(&bank, ell, &f, &h).unwrap().max_abs(), 0.0);
        }
        let (_, f) = random_real_field(&g, 5);
        let zero = SpectralScalarField::zeros(g);
        assert_eq!(dyadic_commutator(&bank, 1, &f, &zero).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn ratio_stays_bounded_over_a_sweep() {
        let g = Grid3::new(16, 64, 2.0 * PI, 2.0 * PI).unwrap();
        let bank = DyadicFilterBank::for_grid(g, BlockDirection::Vertical).unwrap();
        let f = SpectralScalarField::single_mode(g, [0, 0, 1], Complex64::new(0.5, 0.0))
            .add(&SpectralScalarField::single_mode(g, [1, 0, 0], Complex64::new(0.0, 0.25)))
            .unwrap();
        let mut ratios = Vec::new();
        for ell in 1..=4 {
            let k = 3 << (ell - 1);
            let h = SpectralScalarField::single_mode(g, [0, 0, k], Complex64::new(1.0, 0.0));
            let s = commutator_ratio(&bank, ell, &f, &h).unwrap();
            assert!(s.commutator_l2 > 0.0);
            ratios.push(s.ratio);
        }
        assert!(ratios.iter().all(|&r| r < 2.0), "{ratios:?}");
    }
}
