use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic box `[0, l_h)^2 x [0, l_v)` sampled on `n_h x n_h x n_v` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid3 {
    pub n_h: usize,
    pub n_v: usize,
    pub l_h: f64,
    pub l_v: f64,
}

impl Grid3 {
    pub fn new(n_h: usize, n_v: usize, l_h: f64, l_v: f64) -> Result<Self> {
        for (name, n) in [("n_h", n_h), ("n_v", n_v)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be an even integer >= 8"
                )));
            }
        }
        for (name, l) in [("l_h", l_h), ("l_v", l_v)] {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::InvalidGrid(format!("{name} = {l} must be positive")));
            }
        }
        Ok(Self { n_h, n_v, l_h, l_v })
    }

    /// `n^3` points on a `2π`-periodic cube, so wavenumbers are integers.
    pub fn cube(n: usize) -> Result<Self> {
        Self::new(n, n, 2.0 * PI, 2.0 * PI)
    }

    pub fn shape(&self) -> [usize; 3] {
        [self.n_h, self.n_h, self.n_v]
    }

    pub fn len(&self) -> usize {
        self.n_h * self.n_h * self.n_v
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn lengths(&self) -> [f64; 3] {
        [self.l_h, self.l_h, self.l_v]
    }

    pub fn volume(&self) -> f64 {
        self.l_h * self.l_h * self.l_v
    }

    pub fn cell_volume(&self) -> f64 {
        self.volume() / self.len() as f64
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        i1 + self.n_h * (i2 + self.n_h * i3)
    }

    /// Inverse of [`Grid3::index`].
    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let i1 = idx % self.n_h;
        let rest = idx / self.n_h;
        [i1, rest % self.n_h, rest / self.n_h]
    }

    /// Storage index of the mode `-m`.
    #[inline]
    pub fn mirror(&self, idx: usize) -> usize {
        let [i1, i2, i3] = self.unravel(idx);
        let neg = |i: usize, n: usize| (n - i) % n;
        self.index(neg(i1, self.n_h), neg(i2, self.n_h), neg(i3, self.n_v))
    }

    pub fn wavenumbers(&self) -> Wavenumbers {
        Wavenumbers::new(self)
    }

    /// Smallest nonzero horizontal wavenumber `2π / l_h`.
    pub fn k_h_min(&self) -> f64 {
        2.0 * PI / self.l_h
    }

    pub fn k_v_min(&self) -> f64 {
        2.0 * PI / self.l_v
    }

    /// Largest `|k_h|` present on the lattice (corner of the horizontal Nyquist square).
    pub fn k_h_max(&self) -> f64 {
        std::f64::consts::SQRT_2 * (self.n_h / 2) as f64 * self.k_h_min()
    }

    pub fn k_v_max(&self) -> f64 {
        (self.n_v / 2) as f64 * self.k_v_min()
    }
}

/// Signed mode index of storage index `i` on an axis of length `n`: `[0, n/2) -> m`,
/// `[n/2, n) -> m - n`, so `n/2` maps to the Nyquist index `-n/2`.
#[inline]
pub fn signed_mode(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Per-axis wavenumber tables.
///
/// `k*` are the physical wavenumbers `2π m / L` used by every symbol that depends on
/// `|k|` (norms, heat semigroups). `d*` are the derivative wavenumbers: identical except
/// that the Nyquist entry is zero, so `i d_j` maps Hermitian data to Hermitian data.
/// `keep*` is the per-axis 2/3 mask `3|m| < n`.
#[derive(Debug, Clone)]
pub struct Wavenumbers {
    pub k1: Vec<f64>,
    pub k2: Vec<f64>,
    pub k3: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub d3: Vec<f64>,
    pub keep1: Vec<bool>,
    pub keep2: Vec<bool>,
    pub keep3: Vec<bool>,
}

impl Wavenumbers {
    fn new(grid: &Grid3) -> Self {
        let axis = |n: usize, l: f64| {
            let k: Vec<f64> = (0..n)
                .map(|i| 2.0 * PI * signed_mode(i, n) as f64 / l)
                .collect();
            let d: Vec<f64> = k
                .iter()
                .enumerate()
                .map(|(i, &k)| if i == n / 2 { 0.0 } else { k })
                .collect();
            let keep: Vec<bool> = (0..n)
                .map(|i| 3 * signed_mode(i, n).unsigned_abs() < n as u64)
                .collect();
            (k, d, keep)
        };
        let (k1, d1, keep1) = axis(grid.n_h, grid.l_h);
        let (k2, d2, keep2) = axis(grid.n_h, grid.l_h);
        let (k3, d3, keep3) = axis(grid.n_v, grid.l_v);
        Self {
            k1,
            k2,
            k3,
            d1,
            d2,
            d3,
            keep1,
            keep2,
            keep3,
        }
    }

    #[inline]
    pub fn in_band(&self, i1: usize, i2: usize, i3: usize) -> bool {
        self.keep1[i1] && self.keep2[i2] && self.keep3[i3]
    }

    #[inline]
    pub fn kh_sq(&self, i1: usize, i2: usize) -> f64 {
        self.k1[i1] * self.k1[i1] + self.k2[i2] * self.k2[i2]
    }

    /// Derivative wavevector of a mode.
    #[inline]
    pub fn deriv(&self, i1: usize, i2: usize, i3: usize) -> [f64; 3] {
        [self.d1[i1], self.d2[i2], self.d3[i3]]
    }

    /// Largest `|k_h|^2` inside the 2/3 band.
    pub fn band_kh_sq_max(&self) -> f64 {
        let max_kept = |k: &[f64], keep: &[bool]| {
            k.iter()
                .zip(keep)
                .filter(|(_, &kp)| kp)
                .map(|(k, _)| k * k)
                .fold(0.0, f64::max)
        };
        max_kept(&self.k1, &self.keep1) + max_kept(&self.k2, &self.keep2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_or_small_grids() {
        assert!(Grid3::new(7, 8, 1.0, 1.0).is_err());
        assert!(Grid3::new(8, 6, 1.0, 1.0).is_err());
        assert!(Grid3::new(8, 8, 0.0, 1.0).is_err());
        assert!(Grid3::new(8, 8, 1.0, f64::NAN).is_err());
        assert!(Grid3::new(8, 10, 1.0, 2.0).is_ok());
    }

    #[test]
    fn zero_mode_has_zero_wavenumber() {
        let g = Grid3::new(16, 8, 3.0, 5.0).unwrap();
        let w = g.wavenumbers();
        assert_eq!(w.k1[0], 0.0);
        assert_eq!(w.k3[0], 0.0);
        assert_eq!(signed_mode(8, 16), -8);
        assert_eq!(w.d1[8], 0.0);
        assert!(w.k1[8] < 0.0);
    }

    #[test]
    fn index_round_trip_and_mirror() {
        let g = Grid3::new(8, 10, 1.0, 1.0).unwrap();
        for idx in [0, 1, 17, 200, g.len() - 1] {
            let [a, b, c] = g.unravel(idx);
            assert_eq!(g.index(a, b, c), idx);
            assert_eq!(g.mirror(g.mirror(idx)), idx);
        }
        assert_eq!(g.mirror(g.index(1, 0, 0)), g.index(7, 0, 0));
    }

    #[test]
    fn two_thirds_band() {
        let g = Grid3::cube(8).unwrap();
        let w = g.wavenumbers();
        let kept: Vec<i64> = (0..8).filter(|&i| w.keep1[i]).map(|i| signed_mode(i, 8)).collect();
        assert_eq!(kept, vec![0, 1, 2, -2, -1]);
    }
}
