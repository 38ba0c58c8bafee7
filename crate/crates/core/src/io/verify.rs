use std::time::Instant;

use crate::decay::log_times;
use crate::duhamel::{linear_decay_quadrature, QuadratureProfile};
use crate::error::Result;
use crate::solver::{Stepper, ViscosityMode};
use crate::spectral::{Dealias, Grid3};
use crate::testing::band_limited_div_free;

use super::identities::{Check, CheckReport};

/// Largest per-mode relative deviation of the linear-only stepper from
/// `e^{-t|k_h|²} v̂0` after `steps` steps on an `n³` grid.
pub fn semigroup_defect(n: usize, dt: f64, steps: usize) -> Result<f64> {
    let g = Grid3::cube(n)?;
    let v0 = band_limited_div_free(&g, 1, 1.0);
    let mut st = Stepper::new(g, dt, ViscosityMode::LinearOnly, Dealias::TwoThirds)?;
    let mut v = v0.clone();
    for k in 0..steps {
        st.advance(&mut v, k as f64 * dt)?;
    }
    let t = steps as f64 * dt;
    let w = g.wavenumbers();
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let (a, b) = (v0.component(i).coeffs(), v.component(i).coeffs());
        for idx in 0..g.len() {
            let [i1, i2, _] = g.unravel(idx);
            let exact = a[idx] * (-t * w.kh_sq(i1, i2)).exp();
            if exact.norm() > 0.0 {
                worst = worst.max((b[idx] - exact).norm() / exact.norm());
            }
        }
    }
    Ok(worst)
}

/// The linear tier: stepper against the exact semigroup, Gaussian profiles against
/// `(1 + 2t)^{-(a+1)}`, and near-critical div-free profiles against `-(3s/2 + 1/4)`.
pub fn verify_linear() -> Result<CheckReport> {
    let start = Instant::now();
    let mut checks = vec![Check::new("semigroup 32^3, 1000 steps", semigroup_defect(32, 1e-3, 1000)?, 1e-12)];
    let times = log_times(10.0, 1000.0, 41);
    let mut with_zero = vec![0.0];
    with_zero.extend(&times);
    for a in [0.5, 1.0, 1.5] {
        let d = linear_decay_quadrature(&QuadratureProfile::Gaussian { a }, 0.5, &with_zero)?;
        let n0 = d.norm_sq[0];
        let err = with_zero
            .iter()
            .zip(&d.norm_sq)
            .map(|(t, y)| {
                let exact = (1.0 + 2.0 * t).powf(-(a + 1.0));
                (y / n0 - exact).abs() / exact
            })
            .fold(0.0, f64::max);
        checks.push(Check::new(format!("gaussian a={a} values"), err, 1e-6));
        let fit = d.fit.expect("41 positive times");
        checks.push(Check::new(
            format!("gaussian a={a} exponent"),
            (fit.exponent + a + 1.0).abs() / (a + 1.0),
            0.01,
        ));
    }
    for s in [0.5, 0.6, 0.8] {
        let d = linear_decay_quadrature(&QuadratureProfile::near_critical(s, 0.02), s, &times)?;
        let fit = d.fit.expect("41 positive times");
        checks.push(Check::new(format!("div-free s={s} exponent - target"), fit.exponent - d.target, 0.05));
    }
    Ok(CheckReport {
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}
