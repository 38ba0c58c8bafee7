//! Periodic-box spectral representation.
//!
//! # Conventions
//!
//! All spectral arrays, in memory and in checkpoints, follow one layout:
//!
//! * **Index order.** A field on an `n_h x n_h x n_v` grid is a flat array of length
//!   `n_h * n_h * n_v`; storage index `i1 + n_h * (i2 + n_h * i3)`, so axis 1 varies
//!   fastest. Physical samples use the same order with `x_a = i_a L_a / n_a`.
//! * **Modes.** Storage index `i` on an axis of length `n` holds the signed mode
//!   `m = i` for `i < n/2` and `m = i - n` otherwise, i.e. `m ∈ [-n/2, n/2)`. The
//!   wavenumber is `k = 2π m / L`; mode 0 has wavenumber exactly 0.
//! * **Normalization.** `â(m) = N^{-1} Σ_x a(x) e^{-ik.x}` and `a(x) = Σ_m â(m) e^{ik.x}`,
//!   with `N` the number of grid points. Plancherel reads
//!   `Σ_x |a(x)|^2 ΔV = V Σ_m |â(m)|^2`, `ΔV = V / N`, and every norm in this crate
//!   weights lattice sums by the box volume `V`.
//! * **Hermitian storage.** All coefficients are stored (no half-spectrum packing). A real
//!   field satisfies `â(-m) = conj(â(m))`; self-conjugate modes (zero and Nyquist
//!   indices) are real.
//! * **Derivatives.** `∂_j` multiplies by `i k_j` with the Nyquist entry of `k_j` set to
//!   zero, so derivatives of real fields stay real. Symbols that only depend on `|k|`
//!   use the true Nyquist wavenumber.
//! * **Mean.** Evolved fields keep `â(0) = 0`.

mod fft;
mod field;
mod grid;
mod nonlinear;
mod ops;
mod tables;

pub use field::{
    forward_transform, inverse_transform, inverse_transform_complex, mode_storage_index,
    SpectralScalarField, SpectralVectorField,
};
pub(crate) use field::{forward_pair, inverse_pair};
pub use grid::{signed_mode, Grid3, Wavenumbers};
pub use nonlinear::{nonlinear_term, Dealias};
pub(crate) use nonlinear::{
    advection_from_products, nonlinear_from_products, nonlinear_into, products, products_of, Products,
};
pub use ops::{
    apply_multiplier, dealias, derivative, divergence, leray_project, Applied, MultiplierSpec,
};
pub(crate) use ops::{leray_in_place, truncate_coeffs};
