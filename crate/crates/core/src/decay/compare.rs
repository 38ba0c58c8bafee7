use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::solver::{run_from, RunConfig, TrajectoryRecord, ViscosityMode};

use super::fit::{fit_power_law, DecayFit};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: ViscosityMode,
    pub final_energy: f64,
    pub final_v3_l2_sq: f64,
    pub final_vh_l2_sq: f64,
    pub v3_fit: DecayFit,
    pub vh_fit: DecayFit,
    /// `v3_fit.exponent - vh_fit.exponent`
    pub gap: f64,
}

/// Paired runs from the same initial data, differing only in the dissipation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeComparison {
    pub anisotropic: ModeSummary,
    pub isotropic: ModeSummary,
}

pub fn summarize(record: &TrajectoryRecord) -> Result<ModeSummary> {
    let c = &record.config;
    let window = (c.fit_t0, c.fit_t1);
    let t = record.times();
    let v3_fit = fit_power_law("v3_l2_sq", &t, &record.series("v3_l2_sq")?, window)?;
    let vh_fit = fit_power_law("vh_l2_sq", &t, &record.series("vh_l2_sq")?, window)?;
    let last = record.rows.last().copied().unwrap_or_default();
    Ok(ModeSummary {
        mode: c.mode,
        final_energy: last.l2_sq,
        final_v3_l2_sq: last.v3_l2_sq,
        final_vh_l2_sq: last.vh_l2_sq,
        gap: v3_fit.exponent - vh_fit.exponent,
        v3_fit,
        vh_fit,
    })
}

/// Runs `config` once with anisotropic and once with isotropic dissipation.
pub fn compare_modes(config: &RunConfig) -> Result<ModeComparison> {
    let (v0, _) = config.initial_data()?;
    let with = |mode| RunConfig {
        mode,
        ..config.clone()
    };
    let a = run_from(&with(ViscosityMode::Anisotropic), v0.clone())?;
    let i = run_from(&with(ViscosityMode::Isotropic), v0)?;
    Ok(ModeComparison {
        anisotropic: summarize(&a)?,
        isotropic: summarize(&i)?,
    })
}
