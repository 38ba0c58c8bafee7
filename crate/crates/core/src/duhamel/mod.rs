//! Pressure, the Duhamel kernels of `v³` and the split `v³ = v³_L + v³_N1 + v³_N2`,
//! on the lattice and, for the linear part, on ℝ³ by quadrature.

mod kernels;
mod quadrature;
mod split;

pub use kernels::{duhamel_kernels, identity_defects, pressure_field, IdentityDefects};
pub use quadrature::{
    integrate, linear_decay_quadrature, Integral, LinearDecay, QuadratureProfile, QUADRATURE_REL_TOL,
};
pub use split::{reconstruct_v3, DuhamelAccumulator, DuhamelSplit};
