use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::NormReport;
use crate::solver::TrajectoryRecord;

/// Slack for round-off in the interpolation inequality.
const ROUND_OFF: f64 = 1e-12;

/// `‖w‖ <= ‖w‖_{Ḣ^{-s,0}}^{1/(1+s)} ‖∇_h w‖^{s/(1+s)}` at one time, with `w` the field
/// minus its `k_h = 0` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplittingRow {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs / rhs`, 0 when both vanish.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplittingCheck {
    pub s: f64,
    pub rows: Vec<SplittingRow>,
    pub max_ratio: f64,
    pub holds: bool,
}

pub fn fourier_splitting_from_rows(rows: &[NormReport], s: f64) -> Result<SplittingCheck> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::param("s", format!("{s} must lie in (0, 1)")));
    }
    let out: Vec<SplittingRow> = rows
        .iter()
        .map(|r| {
            let lhs = (r.l2_sq - r.khzero_energy).max(0.0).sqrt();
            let rhs = r.hneg_s_sq.sqrt().powf(1.0 / (1.0 + s)) * r.grad_h_l2_sq.sqrt().powf(s / (1.0 + s));
            let ratio = if rhs > 0.0 {
                lhs / rhs
            } else if lhs > 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
            SplittingRow { t: r.t, lhs, rhs, ratio }
        })
        .collect();
    let max_ratio = out.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(SplittingCheck {
        s,
        holds: max_ratio <= 1.0 + ROUND_OFF,
        rows: out,
        max_ratio,
    })
}

/// The Fourier-splitting interpolation along a run.
pub fn fourier_splitting_check(record: &TrajectoryRecord, s: f64) -> Result<SplittingCheck> {
    fourier_splitting_from_rows(&record.rows, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::NormContext;
    use crate::spectral::{Grid3, SpectralVectorField};
    use crate::testing::random_div_free;

    #[test]
    fn holds_on_random_fields() {
        let g = Grid3::new(16, 8, 12.0, 3.0).unwrap();
        for s in [0.45, 0.6, 0.9] {
            let ctx = NormContext::new(g, s, 4.0).unwrap();
            let rows: Vec<NormReport> = (1..6)
                .map(|seed| ctx.evaluate(&random_div_free(&g, seed), seed as f64).unwrap())
                .collect();
            let c = fourier_splitting_from_rows(&rows, s).unwrap();
            assert!(c.holds, "s = {s}: {}", c.max_ratio);
            assert!(c.max_ratio > 0.0);
        }
    }

    #[test]
    fn single_horizontal_shell_is_sharp() {
        // One |k_h| shell: every inequality in the chain is an equality.
        let g = Grid3::new(16, 8, 2.0 * std::f64::consts::PI, 1.0).unwrap();
        let mut v = SpectralVectorField::zeros(g);
        let idx = crate::spectral::mode_storage_index(&g, [0, 3, 1]);
        let mirror = crate::spectral::mode_storage_index(&g, [0, -3, -1]);
        let c = rustfft::num_complex::Complex64::new(0.5, 0.25);
        v.component_mut(0).coeffs_mut()[idx] = c;
        v.component_mut(0).coeffs_mut()[mirror] = c.conj();
        let ctx = NormContext::new(g, 0.5, 4.0).unwrap();
        let row = ctx.evaluate(&v, 1.0).unwrap();
        let chk = fourier_splitting_from_rows(&[row], 0.5).unwrap();
        assert!((chk.max_ratio - 1.0).abs() < 1e-12, "{}", chk.max_ratio);
    }

    #[test]
    fn plane_energy_is_removed() {
        let row = NormReport {
            t: 1.0,
            l2_sq: 5.0,
            khzero_energy: 5.0,
            ..Default::default()
        };
        let c = fourier_splitting_from_rows(&[row], 0.5).unwrap();
        assert_eq!(c.max_ratio, 0.0);
        assert!(c.holds);
    }
}
