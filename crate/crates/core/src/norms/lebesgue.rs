use super::sobolev::{aniso_sobolev_norm, l2_norm, NormInput};
use crate::error::{Error, Result};
use crate::spectral::inverse_transform;

/// Supported Lebesgue exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Two,
    Four,
    Infinity,
}

impl Exponent {
    pub fn from_f64(p: f64) -> Result<Self> {
        match p {
            p if p == 2.0 => Ok(Self::Two),
            p if p == 4.0 => Ok(Self::Four),
            p if p == f64::INFINITY => Ok(Self::Infinity),
            _ => Err(Error::param("exponent", format!("{p} is not one of 2, 4, inf"))),
        }
    }

    fn norm(self, values: impl Iterator<Item = f64>, cell: f64) -> f64 {
        match self {
            Self::Two => (values.map(|x| x * x).sum::<f64>() * cell).sqrt(),
            Self::Four => (values.map(|x| x.powi(4)).sum::<f64>() * cell).powf(0.25),
            Self::Infinity => values.fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

/// `‖a‖_{L^p_h(L^q_v)}`: the `q`-norm along `x_3` at every horizontal grid point, then
/// the `p`-norm over `(x_1, x_2)`. Vector fields use the pointwise Euclidean length.
pub fn mixed_lebesgue_norm<F: NormInput>(a: &F, p_h: f64, q_v: f64) -> Result<f64> {
    let (p, q) = (Exponent::from_f64(p_h)?, Exponent::from_f64(q_v)?);
    let g = *a.grid();
    let mut mag = vec![0.0; g.len()];
    for part in a.parts() {
        for (m, x) in mag.iter_mut().zip(inverse_transform(part)) {
            *m += x * x;
        }
    }
    mag.iter_mut().for_each(|m| *m = m.sqrt());
    let plane = g.n_h * g.n_h;
    let dz = g.l_v / g.n_v as f64;
    let da = (g.l_h / g.n_h as f64).powi(2);
    let inner: Vec<f64> = (0..plane)
        .map(|h| q.norm((0..g.n_v).map(|i3| mag[h + plane * i3]), dz))
        .collect();
    Ok(p.norm(inner.into_iter(), da))
}

/// `‖u‖_{L^4_h(L^2_v)} / (‖u‖^{1/2} ‖∇_h u‖^{1/2})`, invariant under `u -> λ u`.
pub fn interpolation_ratio<F: NormInput>(u: &F) -> Result<f64> {
    let num = mixed_lebesgue_norm(u, 4.0, 2.0)?;
    let den = (l2_norm(u) * aniso_sobolev_norm(u, 1.0, 0.0)?.value).sqrt();
    if den == 0.0 {
        return Err(Error::param("u", "zero field or no horizontal variation"));
    }
    Ok(num / den)
}
