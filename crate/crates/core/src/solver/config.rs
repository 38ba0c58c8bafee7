use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial_data::SpectralEnvelope;
use crate::norms::parameter_gate;
use crate::spectral::{Dealias, Grid3};

use super::ViscosityMode;

/// Everything a run depends on. Keys are flat; unknown keys are rejected.
///
/// | key | default | meaning |
/// |---|---|---|
/// | `n_h`, `n_v` | 64, 32 | modes per horizontal / vertical axis |
/// | `l_h`, `l_v` | 64π, 2π | box lengths |
/// | `dt`, `t_end` | 0.01, 50 | step and final time |
/// | `mode` | `anisotropic` | `anisotropic`, `isotropic` or `linear-only` |
/// | `dealias` | `two-thirds` | `two-thirds` or `none` |
/// | `output_every` | 0.1 | norm-row cadence |
/// | `snapshot_every` | 0 | field snapshot cadence, 0 keeps none |
/// | `duhamel_cadences` | `[]` | streaming Duhamel node spacings |
/// | `s`, `s1` | 0.5, 4 | decay index and vertical regularity |
/// | `c0` | 0.05 | target `B^{0,1/2}` norm of the data, 0 keeps the raw envelope |
/// | `a_h`, `b_v`, `sigma`, `amplitude`, `seed` | 0, 1, 1, 1, 1 | spectral envelope |
/// | `fit_t0`, `fit_t1` | 5, 50 | decay-fit window |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub n_h: usize,
    pub n_v: usize,
    pub l_h: f64,
    pub l_v: f64,
    pub dt: f64,
    pub t_end: f64,
    pub mode: ViscosityMode,
    pub dealias: Dealias,
    pub output_every: f64,
    pub snapshot_every: f64,
    pub duhamel_cadences: Vec<f64>,
    pub s: f64,
    pub s1: f64,
    pub c0: f64,
    pub a_h: f64,
    pub b_v: f64,
    pub sigma: f64,
    pub amplitude: f64,
    pub seed: u64,
    pub fit_t0: f64,
    pub fit_t1: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let e = SpectralEnvelope::default();
        Self {
            n_h: 64,
            n_v: 32,
            l_h: 64.0 * PI,
            l_v: 2.0 * PI,
            dt: 0.01,
            t_end: 50.0,
            mode: ViscosityMode::Anisotropic,
            dealias: Dealias::TwoThirds,
            output_every: 0.1,
            snapshot_every: 0.0,
            duhamel_cadences: Vec::new(),
            s: 0.5,
            s1: 4.0,
            c0: 0.05,
            a_h: e.a_h,
            b_v: e.b_v,
            sigma: e.sigma,
            amplitude: e.amplitude,
            seed: e.seed,
            fit_t0: 5.0,
            fit_t1: 50.0,
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid3> {
        Grid3::new(self.n_h, self.n_v, self.l_h, self.l_v)
    }

    pub fn envelope(&self) -> SpectralEnvelope {
        SpectralEnvelope {
            a_h: self.a_h,
            b_v: self.b_v,
            sigma: self.sigma,
            amplitude: self.amplitude,
            seed: self.seed,
        }
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Number of steps between events spaced by `every`.
    pub fn stride(&self, name: &'static str, every: f64) -> Result<usize> {
        let r = every / self.dt;
        let n = r.round();
        if !(every.is_finite() && n >= 1.0 && (r - n).abs() <= 1e-9 * n) {
            return Err(Error::param(
                name,
                format!("{every} must be a positive multiple of dt = {}", self.dt),
            ));
        }
        Ok(n as usize)
    }

    /// `t1 <= (l_h / 2π)² / 4`: past it the lowest horizontal mode dominates.
    pub fn infrared_bound(&self) -> f64 {
        (self.l_h / (2.0 * PI)).powi(2) / 4.0
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::param("dt", format!("{} must be positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::param("t_end", format!("{} must be nonnegative", self.t_end)));
        }
        let steps = self.t_end / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::param(
                "t_end",
                format!("{} is not a whole number of steps dt = {}", self.t_end, self.dt),
            ));
        }
        self.stride("output_every", self.output_every)?;
        if self.snapshot_every != 0.0 {
            self.stride("snapshot_every", self.snapshot_every)?;
        }
        for &c in &self.duhamel_cadences {
            self.stride("duhamel_cadences", c)?;
        }
        parameter_gate(self.s, self.s1)?;
        if !(self.c0.is_finite() && self.c0 >= 0.0) {
            return Err(Error::param("c0", format!("{} must be nonnegative", self.c0)));
        }
        self.envelope().validate(self.s)?;
        if !(self.fit_t0 > 0.0 && self.fit_t1 > self.fit_t0) {
            return Err(Error::param(
                "fit_t1",
                format!("window ({}, {}) must satisfy 0 < t0 < t1", self.fit_t0, self.fit_t1),
            ));
        }
        Ok(())
    }
}
