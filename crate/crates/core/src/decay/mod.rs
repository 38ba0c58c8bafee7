//! Power-law fits of monitored norms and the decay acceptance report.

mod acceptance;
mod compare;
mod fit;
mod splitting;

pub use acceptance::{acceptance, acceptance_from_rows, AcceptanceReport, OrderingCheck, TargetCheck, Tolerances};
pub use compare::{compare_modes, summarize, ModeComparison, ModeSummary};
pub use fit::{fit_power_law, log_times, DecayFit, MIN_SAMPLES};
pub use splitting::{fourier_splitting_check, fourier_splitting_from_rows, SplittingCheck, SplittingRow};
