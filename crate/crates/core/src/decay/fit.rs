use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest number of samples a fit window must hold.
pub const MIN_SAMPLES: usize = 10;

/// Least-squares power law `N(t) ≈ C t^exponent` on `(log t, log N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub quantity: String,
    pub window: (f64, f64),
    pub exponent: f64,
    pub stderr: f64,
    pub r_squared: f64,
    pub prefactor: f64,
    pub samples: usize,
    /// Mean fraction of the energy on the plane `k_h = 0` over the window, when known.
    pub excluded_fraction: Option<f64>,
}

pub fn fit_power_law(quantity: &str, t: &[f64], y: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    if t.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: t.len(),
            actual: y.len(),
        });
    }
    let (t0, t1) = window;
    if !(t0 > 0.0 && t1 > t0) {
        return Err(Error::Fit(format!("window ({t0}, {t1}) must satisfy 0 < t0 < t1")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&ti, &yi) in t.iter().zip(y) {
        if ti < t0 || ti > t1 {
            continue;
        }
        if !(yi > 0.0 && yi.is_finite()) {
            return Err(Error::Fit(format!("{quantity}: sample {yi:e} at t = {ti} is not positive")));
        }
        xs.push(ti.ln());
        ys.push(yi.ln());
    }
    let n = xs.len();
    if n < MIN_SAMPLES {
        return Err(Error::Fit(format!(
            "{quantity}: {n} samples in ({t0}, {t1}), need at least {MIN_SAMPLES}"
        )));
    }
    // Shift by the first sample so a constant series gives an exactly zero slope.
    let (x0, y0) = (xs[0], ys[0]);
    let xm = xs.iter().map(|x| x - x0).sum::<f64>() / n as f64;
    let ym = ys.iter().map(|y| y - y0).sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - x0 - xm, y - y0 - ym);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::Fit(format!("{quantity}: all samples share one time")));
    }
    let slope = sxy / sxx;
    let intercept = (y0 + ym) - slope * (x0 + xm);
    let sse = (syy - slope * sxy).max(0.0);
    let stderr = (sse / (n - 2) as f64 / sxx).sqrt();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(DecayFit {
        quantity: quantity.to_string(),
        window,
        exponent: slope,
        stderr,
        r_squared,
        prefactor: intercept.exp(),
        samples: n,
        excluded_fraction: None,
    })
}

/// `n` log-spaced points on `[t0, t1]`.
pub fn log_times(t0: f64, t1: f64, n: usize) -> Vec<f64> {
    let (a, b) = (t0.ln(), t1.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn exact_inverse_law() {
        let t = log_times(1.0, 100.0, 30);
        let y: Vec<f64> = t.iter().map(|t| 3.0 / t).collect();
        let f = fit_power_law("x", &t, &y, (1.0, 100.0)).unwrap();
        assert!((f.exponent + 1.0).abs() < 1e-10);
        assert!((f.prefactor - 3.0).abs() < 1e-9);
        assert!(f.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn constant_series_has_zero_exponent() {
        let t = log_times(1.0, 10.0, 12);
        let f = fit_power_law("c", &t, &vec![0.1; 12], (1.0, 10.0)).unwrap();
        assert_eq!(f.exponent, 0.0);
        assert_eq!(f.stderr, 0.0);
    }

    #[test]
    fn noisy_law_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = log_times(1.0, 1000.0, 200);
        let y: Vec<f64> = t
            .iter()
            .map(|t| 2.0 * t.powf(-0.6) * (1.0 + 1e-3 * rng.random_range(-1.0..1.0)))
            .collect();
        let f = fit_power_law("n", &t, &y, (1.0, 1000.0)).unwrap();
        assert!((f.exponent + 0.6).abs() < 0.01);
        assert!((f.exponent + 0.6).abs() < 5.0 * f.stderr.max(1e-6));
    }

    #[test]
    fn rejects_short_or_nonpositive_windows() {
        let t = log_times(1.0, 10.0, 9);
        let y = vec![1.0; 9];
        assert!(matches!(fit_power_law("s", &t, &y, (1.0, 10.0)), Err(Error::Fit(_))));
        let t = log_times(1.0, 10.0, 12);
        let mut y = vec![1.0; 12];
        y[3] = 0.0;
        assert!(matches!(fit_power_law("z", &t, &y, (1.0, 10.0)), Err(Error::Fit(_))));
    }

    proptest! {
        #[test]
        fn planted_exponents(p in -3.0f64..1.0, c in 0.01f64..100.0) {
            let t = log_times(2.0, 50.0, 15);
            let y: Vec<f64> = t.iter().map(|t| c * t.powf(p)).collect();
            let f = fit_power_law("p", &t, &y, (2.0, 50.0)).unwrap();
            prop_assert!((f.exponent - p).abs() < 1e-9);
        }
    }
}
