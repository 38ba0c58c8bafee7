//! Anisotropic Littlewood–Paley theory on the lattice: dyadic blocks in `|ξ_h|` or
//! `|ξ_3|`, Bony's decomposition, dyadic commutators and Bernstein ratios.

mod bank;
mod bernstein;
mod bony;
mod commutator;
pub mod cutoff;

pub use bank::{BlockDirection, BlockKind, DyadicFilterBank, Profile};
pub use bernstein::{bernstein_check, BernsteinReport};
pub use bony::{bony_decompose, physical_product, BonySplit};
pub use commutator::{commutator_ratio, dyadic_commutator, CommutatorSample};
