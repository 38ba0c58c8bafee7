use super::bank::DyadicFilterBank;
use crate::error::Result;
use crate::spectral::{forward_pair, inverse_pair, inverse_transform, SpectralScalarField};

/// `f g = T_f g + T_g f + R(f, g) + low_block` in one direction.
///
/// With blocks `B_low, Δ_{j_min}, ..., Δ_{j_max}`:
/// `T_f g = Σ_k S_{k-1} f Δ_k g` (pairs two or more blocks apart),
/// `R = Σ_{k >= j_min} Δ_k f (Δ_{k-1} + Δ_k + Δ_{k+1}) g`, and
/// `low_block = B_low f (B_low + Δ_{j_min}) g` is the base term of the truncated bank.
#[derive(Debug, Clone)]
pub struct BonySplit {
    pub t_fg: SpectralScalarField,
    pub t_gf: SpectralScalarField,
    pub remainder: SpectralScalarField,
    pub low_block: SpectralScalarField,
}

impl BonySplit {
    pub fn sum(&self) -> SpectralScalarField {
        let s = self.t_fg.add(&self.t_gf).expect("shared grid");
        let s = s.add(&self.remainder).expect("shared grid");
        s.add(&self.low_block).expect("shared grid")
    }
}

/// Pointwise product `f g` with the same (aliased) transform pair the split uses.
pub fn physical_product(f: &SpectralScalarField, g: &SpectralScalarField) -> Result<SpectralScalarField> {
    if f.grid() != g.grid() {
        return Err(crate::Error::GridMismatch);
    }
    let grid = *f.grid();
    // Separate syntheses keep an exactly zero factor exactly zero.
    let (x, y) = (inverse_transform(f), inverse_transform(g));
    let p: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a * b).collect();
    crate::spectral::forward_transform(&p, &grid)
}

pub fn bony_decompose(
    bank: &DyadicFilterBank,
    f: &SpectralScalarField,
    g: &SpectralScalarField,
) -> Result<BonySplit> {
    bank.check_grid(f.grid())?;
    bank.check_grid(g.grid())?;
    let grid = *f.grid();
    let n = grid.len();
    let fb = bank.blocks(f)?;
    let gb = bank.blocks(g)?;
    let (fx, gx): (Vec<Vec<f64>>, Vec<Vec<f64>>) = fb
        .iter()
        .zip(&gb)
        .map(|(a, b)| inverse_pair(a.coeffs(), b.coeffs(), &grid))
        .unzip();
    let nb = fx.len();

    let mut t_fg = vec![0.0; n];
    let mut t_gf = vec![0.0; n];
    let mut rem = vec![0.0; n];
    let mut low = vec![0.0; n];
    let mut s_f = vec![0.0; n];
    let mut s_g = vec![0.0; n];
    for k in 0..nb {
        if k >= 2 {
            for i in 0..n {
                s_f[i] += fx[k - 2][i];
                s_g[i] += gx[k - 2][i];
            }
            for i in 0..n {
                t_fg[i] += s_f[i] * gx[k][i];
                t_gf[i] += s_g[i] * fx[k][i];
            }
        }
        let near = |i: usize| {
            let mut s = gx[k][i];
            if k + 1 < nb {
                s += gx[k + 1][i];
            }
            if k >= 1 {
                s += gx[k - 1][i];
            }
            fx[k][i] * s
        };
        let out = if k == 0 { &mut low } else { &mut rem };
        for (i, o) in out.iter_mut().enumerate() {
            *o += near(i);
        }
    }
    let to = |c: Vec<rustfft::num_complex::Complex64>| SpectralScalarField::from_coeffs(grid, c);
    let (a, b) = forward_pair(&t_fg, &t_gf, &grid);
    let (c, d) = forward_pair(&rem, &low, &grid);
    Ok(BonySplit {
        t_fg: to(a)?,
        t_gf: to(b)?,
        remainder: to(c)?,
        low_block: to(d)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::BlockDirection;
    use crate::spectral::Grid3;
    use crate::testing::random_real_field;
    use rustfft::num_complex::Complex64;

    fn rel(a: &SpectralScalarField, b: &SpectralScalarField) -> f64 {
        a.sub(b).unwrap().l2() / b.l2()
    }

    #[test]
    fn reconstruction_on_random_fields() {
        let g = Grid3::new(16, 16, 9.0, 4.0).unwrap();
        for dir in [BlockDirection::Horizontal, BlockDirection::Vertical] {
            let bank = DyadicFilterBank::for_grid(g, dir).unwrap();
            let (_, f) = random_real_field(&g, 1);
            let (_, h) = random_real_field(&g, 2);
            let split = bony_decompose(&bank, &f, &h).unwrap();
            assert!(rel(&split.sum(), &physical_product(&f, &h).unwrap()) <= 1e-10);
        }
    }

    #[test]
    fn constant_multiplier() {
        let g = Grid3::cube(16).unwrap();
        let bank = DyadicFilterBank::for_grid(g, BlockDirection::Horizontal).unwrap();
        let mut f = SpectralScalarField::zeros(g);
        f.coeffs_mut()[0] = Complex64::new(2.5, 0.0);
        let (_, h) = random_real_field(&g, 3);
        let split = bony_decompose(&bank, &f, &h).unwrap();
        let fg = physical_product(&f, &h).unwrap();
        assert!(rel(&split.sum(), &fg) <= 1e-10);
        assert!(split.remainder.l2() <= 1e-14 * fg.l2());
        let base = split.t_fg.add(&split.low_block).unwrap();
        assert!(rel(&base, &fg) <= 1e-12);
        assert!(split.t_gf.l2() <= 1e-14 * fg.l2());
    }

    #[test]
    fn separated_spectra_kill_the_reverse_paraproduct() {
        let g = Grid3::cube(32).unwrap();
        let bank = DyadicFilterBank::for_grid(g, BlockDirection::Horizontal).unwrap();
        let f = SpectralScalarField::single_mode(g, [1, 0, 2], Complex64::new(0.3, 0.1));
        let h = SpectralScalarField::single_mode(g, [12, 3, 0], Complex64::new(1.0, -0.4));
        let split = bony_decompose(&bank, &f, &h).unwrap();
        let fg = physical_product(&f, &h).unwrap();
        assert!(split.t_gf.l2() <= 1e-8 * fg.l2());
        // S_{k-1} f Δ_k g lives in an annulus of size ~2^k.
        let w = g.wavenumbers();
        for (i, z) in split.t_fg.coeffs().iter().enumerate() {
            if z.norm() > 1e-12 {
                let [a, b, _] = g.unravel(i);
                let kh = w.kh_sq(a, b).sqrt();
                assert!((8.0..=16.0).contains(&kh), "{kh}");
            }
        }
    }
}
