//! Norms and data functionals: `Ḣ^{s,s'}`, `B^{0,1/2}`, `L^p_h(L^q_v)`, `A_s`, `B_s`,
//! `E_0`, and the per-time monitoring row used by the solver.
//!
//! Lattice sums are weighted by the box volume, matching Plancherel in
//! [`crate::spectral`]. `L^∞` norms are grid maxima.

mod functionals;
mod lebesgue;
mod report;
mod sobolev;

pub use functionals::{
    data_functionals, gate_lower_bound, gate_lower_bound_rational, parameter_gate,
    InitialDataReport,
};
pub use lebesgue::{interpolation_ratio, mixed_lebesgue_norm, Exponent};
pub use report::{NormContext, NormReport};
pub use sobolev::{aniso_sobolev_norm, b0half_norm, l2_norm, NormInput, NormSpec, NormValue, SingularPolicy};
