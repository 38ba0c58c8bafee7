use serde::{Deserialize, Serialize};

use super::cutoff::{chi, phi, CHI_EDGE, CHI_FLAT, PHI_INNER};
use crate::error::{Error, Result};
use crate::spectral::{Grid3, SpectralScalarField};

/// Which frequency variable a bank localizes: `|ξ_h|` or `|ξ_3|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockDirection {
    Horizontal,
    Vertical,
}

/// `Delta` is the annulus block `φ(2^{-j} τ)`, `Low` the ball `χ(2^{-j} τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    Delta,
    Low,
}

#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Standard,
    /// `φ` scaled by `1 + 10^{-3}`; a negative control for the partition checks.
    Corrupted,
}

/// Dyadic blocks `Δ_j` for `j_min <= j <= j_max` in one direction, plus the low block
/// `S_{j_min}` that collects everything below.
///
/// On the torus the bank is truncated: `S_{j_min} + Σ_{j_min}^{j_max} Δ_j = S_{j_max+1}`,
/// which is the identity once `1.5 * 2^{j_max}` reaches the largest lattice wavenumber.
#[derive(Debug, Clone)]
pub struct DyadicFilterBank {
    grid: Grid3,
    direction: BlockDirection,
    j_min: i32,
    j_max: i32,
    samples: usize,
    profile: Profile,
}

impl DyadicFilterBank {
    /// Explicit index range.
    ///
    /// Errors with [`Error::BankTooFine`] when a requested annulus lies beyond the grid,
    /// and with [`Error::InvalidParameter`] when the range does not cover the lattice.
    pub fn build(grid: Grid3, direction: BlockDirection, j_min: i32, j_max: i32) -> Result<Self> {
        if j_min >= j_max {
            return Err(Error::param("j_min", format!("{j_min} must be below j_max = {j_max}")));
        }
        let (_, k_max) = extent(&grid, direction);
        let max_feasible = (k_max / PHI_INNER).log2().floor() as i32;
        if j_max > max_feasible {
            return Err(Error::BankTooFine {
                requested: j_max,
                max_feasible,
            });
        }
        if 2f64.powi(j_max + 1) * CHI_FLAT < k_max {
            return Err(Error::param(
                "j_max",
                format!("{j_max} leaves wavenumbers up to {k_max} outside the bank"),
            ));
        }
        Ok(Self {
            grid,
            direction,
            j_min,
            j_max,
            samples: 10_000,
            profile: Profile::Standard,
        })
    }

    /// The bank whose low block holds only the plane `τ = 0` and whose top block reaches
    /// the lattice corner.
    pub fn for_grid(grid: Grid3, direction: BlockDirection) -> Result<Self> {
        let (k_min, k_max) = extent(&grid, direction);
        let j_min = lowest_index(k_min);
        let j_max = ((k_max / (2.0 * CHI_FLAT)).log2().ceil() as i32).max(j_min + 1);
        Self::build(grid, direction, j_min, j_max)
    }

    #[doc(hidden)]
    pub fn with_profile(mut self, profile: Profile) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples.max(2);
        self
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn direction(&self) -> BlockDirection {
        self.direction
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Label of the low block in [`DyadicFilterBank::block_indices`].
    pub fn low_index(&self) -> i32 {
        self.j_min - 1
    }

    /// `low_index(), j_min, ..., j_max`.
    pub fn block_indices(&self) -> Vec<i32> {
        (self.low_index()..=self.j_max).collect()
    }

    pub fn chi(&self, tau: f64) -> f64 {
        chi(tau)
    }

    pub fn phi(&self, tau: f64) -> f64 {
        match self.profile {
            Profile::Standard => phi(tau),
            Profile::Corrupted => phi(tau) * (1.0 + 1e-3),
        }
    }

    /// Symbol of block `j` at `τ`; `j = low_index()` is the low block.
    pub fn block_weight(&self, j: i32, tau: f64) -> f64 {
        if j == self.low_index() {
            self.chi(tau * 2f64.powi(-self.j_min))
        } else {
            self.phi(tau * 2f64.powi(-j))
        }
    }

    /// Largest `τ` the bank resolves to the identity.
    pub fn tau_max(&self) -> f64 {
        2.0 * CHI_FLAT * 2f64.powi(self.j_max)
    }

    /// `max |S_{j_min}(τ) + Σ_j Δ_j(τ) - 1|` over `samples` points of `[0, tau_max]`.
    pub fn partition_residual(&self) -> f64 {
        let top = self.tau_max();
        (0..self.samples)
            .map(|i| {
                let tau = top * i as f64 / (self.samples - 1) as f64;
                let sum: f64 = self.block_indices().iter().map(|&j| self.block_weight(j, tau)).sum();
                (sum - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `max |Σ_{j_min}^{j_max} φ(2^{-j} τ) - 1|` over the range where the truncated
    /// homogeneous sum is complete, `[4/3 2^{j_min}, 3/2 2^{j_max}]`.
    pub fn homogeneous_residual(&self) -> f64 {
        let lo = CHI_EDGE * 2f64.powi(self.j_min);
        let hi = self.tau_max();
        (0..self.samples)
            .map(|i| {
                let tau = lo + (hi - lo) * i as f64 / (self.samples - 1) as f64;
                let sum: f64 = (self.j_min..=self.j_max).map(|j| self.phi(tau * 2f64.powi(-j))).sum();
                (sum - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `Δ_j a` or `S_j a`. `Delta` accepts `j_min..=j_max`, `Low` accepts
    /// `j_min..=j_max + 1`.
    pub fn dyadic_block(&self, a: &SpectralScalarField, kind: BlockKind, j: i32) -> Result<SpectralScalarField> {
        self.check_grid(a.grid())?;
        let top = match kind {
            BlockKind::Delta => self.j_max,
            BlockKind::Low => self.j_max + 1,
        };
        if j < self.j_min || j > top {
            return Err(Error::IndexOutsideBank {
                index: j,
                j_min: self.j_min,
                j_max: top,
            });
        }
        let scale = 2f64.powi(-j);
        Ok(match kind {
            BlockKind::Delta => self.apply(a, |tau| self.phi(tau * scale)),
            BlockKind::Low => self.apply(a, |tau| self.chi(tau * scale)),
        })
    }

    /// Block `j` of [`DyadicFilterBank::block_indices`].
    pub fn block(&self, a: &SpectralScalarField, j: i32) -> Result<SpectralScalarField> {
        if j == self.low_index() {
            self.dyadic_block(a, BlockKind::Low, self.j_min)
        } else {
            self.dyadic_block(a, BlockKind::Delta, j)
        }
    }

    /// Every block, in the order of [`DyadicFilterBank::block_indices`].
    pub fn blocks(&self, a: &SpectralScalarField) -> Result<Vec<SpectralScalarField>> {
        self.block_indices().into_iter().map(|j| self.block(a, j)).collect()
    }

    /// `‖Σ blocks - a‖ / ‖a‖` (0 for `a = 0`).
    pub fn reconstruction_residual(&self, a: &SpectralScalarField) -> Result<f64> {
        let mut sum = SpectralScalarField::zeros(*a.grid());
        for b in self.blocks(a)? {
            sum = sum.add(&b)?;
        }
        let norm = a.l2();
        let err = sum.sub(a)?.l2();
        Ok(if norm == 0.0 { err } else { err / norm })
    }

    /// Squared `L²` norm of every block, computed in frequency.
    pub fn block_energies(&self, a: &SpectralScalarField) -> Result<Vec<(i32, f64)>> {
        self.check_grid(a.grid())?;
        let taus = self.mode_taus();
        let c = a.coeffs();
        let v = self.grid.volume();
        Ok(self
            .block_indices()
            .into_iter()
            .map(|j| {
                let e: f64 = c
                    .iter()
                    .zip(&taus)
                    .map(|(z, &t)| {
                        let w = self.block_weight(j, t);
                        w * w * z.norm_sqr()
                    })
                    .sum();
                (j, v * e)
            })
            .collect())
    }

    /// `τ` of every storage index: `|k_h|` or `|k_3|`.
    pub(crate) fn mode_taus(&self) -> Vec<f64> {
        let g = &self.grid;
        let w = g.wavenumbers();
        let mut out = Vec::with_capacity(g.len());
        for i3 in 0..g.n_v {
            for i2 in 0..g.n_h {
                for i1 in 0..g.n_h {
                    out.push(match self.direction {
                        BlockDirection::Horizontal => w.kh_sq(i1, i2).sqrt(),
                        BlockDirection::Vertical => w.k3[i3].abs(),
                    });
                }
            }
        }
        out
    }

    pub(crate) fn apply(&self, a: &SpectralScalarField, symbol: impl Fn(f64) -> f64) -> SpectralScalarField {
        let taus = self.mode_taus();
        let coeffs = a.coeffs().iter().zip(&taus).map(|(z, &t)| z * symbol(t)).collect();
        SpectralScalarField::from_coeffs(*a.grid(), coeffs).expect("grid-sized array")
    }

    pub(crate) fn check_grid(&self, g: &Grid3) -> Result<()> {
        if *g != self.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }
}

fn extent(grid: &Grid3, direction: BlockDirection) -> (f64, f64) {
    match direction {
        BlockDirection::Horizontal => (grid.k_h_min(), grid.k_h_max()),
        BlockDirection::Vertical => (grid.k_v_min(), grid.k_v_max()),
    }
}

/// Largest `j` with `4/3 2^j < k_min`, so `χ(2^{-j} τ)` vanishes on every nonzero mode.
fn lowest_index(k_min: f64) -> i32 {
    let mut j = (k_min / CHI_EDGE).log2().floor() as i32;
    while CHI_EDGE * 2f64.powi(j) >= k_min {
        j -= 1;
    }
    j
}
