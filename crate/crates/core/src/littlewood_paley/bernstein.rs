use serde::Serialize;

use super::bank::{BlockDirection, DyadicFilterBank};
use super::cutoff::{PHI_INNER, PHI_OUTER};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct BernsteinReport {
    pub band: i32,
    pub order: u32,
    /// `‖|D|^{|α|} a‖ / ‖a‖`, `D` the gradient in the bank's direction.
    pub ratio: f64,
    /// `‖∂^α a‖ / ‖a‖`; only the upper bound applies to it.
    pub partial_ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub within: bool,
}

/// Checks `(3/4 2^j)^{|α|} <= ‖|D|^{|α|} a‖ / ‖a‖ <= (8/3 2^j)^{|α|}` for `a` supported
/// in the annulus `2^j {3/4 <= τ <= 8/3}`.
///
/// `alpha` is `(α_1, α_2)` for a horizontal bank and `(β)` for a vertical one.
pub fn bernstein_check(
    bank: &DyadicFilterBank,
    a: &crate::spectral::SpectralScalarField,
    band: i32,
    alpha: &[u32],
) -> Result<BernsteinReport> {
    bank.check_grid(a.grid())?;
    let dims = match bank.direction() {
        BlockDirection::Horizontal => 2,
        BlockDirection::Vertical => 1,
    };
    if alpha.len() != dims {
        return Err(Error::param("alpha", format!("expected {dims} entries, got {}", alpha.len())));
    }
    let amax = a.max_abs();
    if amax == 0.0 {
        return Err(Error::param("a", "field is zero"));
    }
    let order: u32 = alpha.iter().sum();
    let scale = 2f64.powi(band);
    let (lo, hi) = (PHI_INNER * scale, PHI_OUTER * scale);
    let slack = 1e-12 * hi;

    let g = *a.grid();
    let w = g.wavenumbers();
    let taus = bank.mode_taus();
    let (mut base, mut full, mut partial) = (0.0, 0.0, 0.0);
    for (idx, z) in a.coeffs().iter().enumerate() {
        let e = z.norm_sqr();
        if e == 0.0 {
            continue;
        }
        let tau = taus[idx];
        if (tau < lo - slack || tau > hi + slack) && z.norm() > 1e-14 * amax {
            return Err(Error::NotBanded {
                band,
                reason: format!("mode with tau = {tau} outside [{lo}, {hi}]"),
            });
        }
        let [i1, i2, i3] = g.unravel(idx);
        let sym: f64 = match bank.direction() {
            BlockDirection::Horizontal => {
                w.d1[i1].abs().powi(alpha[0] as i32) * w.d2[i2].abs().powi(alpha[1] as i32)
            }
            BlockDirection::Vertical => w.d3[i3].abs().powi(alpha[0] as i32),
        };
        base += e;
        full += tau.powi(2 * order as i32) * e;
        partial += sym * sym * e;
    }
    let ratio = (full / base).sqrt();
    let lower = lo.powi(order as i32);
    let upper = hi.powi(order as i32);
    let tol = 1e-12 * upper.max(1.0);
    Ok(BernsteinReport {
        band,
        order,
        ratio,
        partial_ratio: (partial / base).sqrt(),
        lower,
        upper,
        within: ratio >= lower - tol && ratio <= upper + tol,
    })
}
