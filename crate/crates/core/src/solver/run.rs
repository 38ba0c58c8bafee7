use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial_data::{generate, rescale_to_smallness};
use crate::norms::{data_functionals, InitialDataReport, NormContext, NormReport};
use crate::spectral::{products_of, Grid3, Products, SpectralVectorField};

use super::energy::EnergyLedger;
use super::{energy_of, RunConfig, Stepper};

/// Courant number used by the advisory.
pub const C_CFL: f64 = 1.0;

/// Growth of `‖v‖_∞` over its initial value treated as blow-up.
pub const BLOW_UP_FACTOR: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CflAdvisory {
    pub dt: f64,
    /// `C_CFL Δx / ‖v0‖_∞`, infinite for zero data.
    pub limit: f64,
    pub satisfied: bool,
}

impl CflAdvisory {
    pub fn new(grid: &Grid3, dt: f64, linf: f64) -> Self {
        let dx = (grid.l_h / grid.n_h as f64).min(grid.l_v / grid.n_v as f64);
        let limit = if linf > 0.0 { C_CFL * dx / linf } else { f64::INFINITY };
        Self {
            dt,
            limit,
            satisfied: dt <= limit,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub v: SpectralVectorField,
}

/// The state handed to an [`Observer`] at every step time `t = step dt`, including the
/// final one.
pub struct StepState<'a> {
    pub step: usize,
    pub t: f64,
    pub v: &'a SpectralVectorField,
    pub(crate) products: Option<&'a Products>,
}

pub trait Observer {
    fn observe(&mut self, state: &StepState<'_>) -> Result<()>;
}

#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub config: RunConfig,
    pub grid: Grid3,
    /// Data functionals of the initial field, when the field admits them.
    pub initial: Option<InitialDataReport>,
    /// Norm rows at the output cadence, times strictly increasing.
    pub rows: Vec<NormReport>,
    /// Energy and dissipation at every step.
    pub ledger: EnergyLedger,
    pub snapshots: Vec<Snapshot>,
    pub cfl: CflAdvisory,
    pub final_field: SpectralVectorField,
}

impl TrajectoryRecord {
    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    /// Column `name` of the norm rows.
    pub fn series(&self, name: &str) -> Result<Vec<f64>> {
        if !NormReport::COLUMNS.contains(&name) {
            return Err(Error::MissingSeries(name.to_string()));
        }
        Ok(self.rows.iter().map(|r| r.get(name).expect("known column")).collect())
    }

    /// Largest `max|k.v̂|` over the recorded rows.
    pub fn max_divergence(&self) -> f64 {
        self.rows.iter().map(|r| r.div_max).fold(0.0, f64::max)
    }
}

impl RunConfig {
    /// Envelope sample, projected, rescaled to `B^{0,1/2}` norm `c0` when `c0 > 0`.
    pub fn initial_data(&self) -> Result<(SpectralVectorField, InitialDataReport)> {
        self.validate()?;
        let grid = self.grid()?;
        let (v0, report) = generate(&self.envelope(), &grid, self.s, self.s1)?;
        if self.c0 == 0.0 {
            return Ok((v0, report));
        }
        let v0 = rescale_to_smallness(&v0, self.c0)?;
        let report = data_functionals(&v0, self.s, self.s1)?;
        Ok((v0, report))
    }
}

/// Generates the configured data and integrates it.
pub fn run(config: &RunConfig) -> Result<TrajectoryRecord> {
    let (v0, _) = config.initial_data()?;
    run_observed(config, v0, &mut [])
}

/// Integrates `v0` under `config`, ignoring its envelope keys.
pub fn run_from(config: &RunConfig, v0: SpectralVectorField) -> Result<TrajectoryRecord> {
    run_observed(config, v0, &mut [])
}

/// [`run_from`] with observers called at every step time.
pub fn run_observed(
    config: &RunConfig,
    v0: SpectralVectorField,
    observers: &mut [&mut dyn Observer],
) -> Result<TrajectoryRecord> {
    config.validate()?;
    let grid = config.grid()?;
    if *v0.grid() != grid {
        return Err(Error::GridMismatch);
    }
    let ctx = NormContext::new(grid, config.s, config.s1)?;
    let mut stepper = Stepper::new(grid, config.dt, config.mode, config.dealias)?;
    let steps = config.steps();
    let out_stride = config.stride("output_every", config.output_every)?;
    let snap_stride = if config.snapshot_every > 0.0 {
        Some(config.stride("snapshot_every", config.snapshot_every)?)
    } else {
        None
    };

    let initial = data_functionals(&v0, config.s, config.s1).ok();
    let linf0 = v0.linf();
    let cfl = CflAdvisory::new(&grid, config.dt, linf0);
    if !cfl.satisfied {
        warn!("dt = {} exceeds the CFL advisory limit {:.3e}", config.dt, cfl.limit);
    }
    info!(
        "run: {} mode, {}x{}x{} grid, {} steps of {}",
        config.mode.name(),
        grid.n_h,
        grid.n_h,
        grid.n_v,
        steps,
        config.dt
    );

    let mut rows = Vec::with_capacity(steps / out_stride + 2);
    let mut ledger = EnergyLedger::with_capacity(steps + 1);
    let mut snapshots = Vec::new();
    let mut v = v0;

    let symbol = stepper.symbol().to_vec();
    let mut record_at = |n: usize,
                         v: &SpectralVectorField,
                         products: Option<&Products>,
                         rows: &mut Vec<NormReport>,
                         ledger: &mut EnergyLedger,
                         snapshots: &mut Vec<Snapshot>|
     -> Result<()> {
        let t = n as f64 * config.dt;
        let (e, d) = energy_of(&grid, &symbol, v);
        if !e.is_finite() {
            return Err(Error::BlowUp {
                time: t,
                reason: "non-finite energy".into(),
            });
        }
        ledger.push(t, e, d);
        if n % out_stride == 0 || n == steps {
            let row = ctx.evaluate(v, t)?;
            if row.linf > BLOW_UP_FACTOR * linf0 || !row.linf.is_finite() {
                return Err(Error::BlowUp {
                    time: t,
                    reason: format!("‖v‖_∞ = {:e} exceeds {BLOW_UP_FACTOR:e} x initial {linf0:e}", row.linf),
                });
            }
            rows.push(row);
        }
        if let Some(k) = snap_stride {
            if n % k == 0 || n == steps {
                snapshots.push(Snapshot { t, v: v.clone() });
            }
        }
        let state = StepState { step: n, t, v, products };
        for o in observers.iter_mut() {
            o.observe(&state)?;
        }
        Ok(())
    };

    let report_every = (steps / 10).max(1);
    for n in 0..steps {
        let t = n as f64 * config.dt;
        stepper.advance_with(&mut v, t, |v, p| {
            record_at(n, v, p, &mut rows, &mut ledger, &mut snapshots)
        })?;
        if (n + 1) % report_every == 0 {
            info!("t = {:.3}", (n + 1) as f64 * config.dt);
        }
    }
    let products = if config.mode.is_linear() {
        None
    } else {
        let [a, b, c] = v.components();
        Some(products_of(&grid, [a.coeffs(), b.coeffs(), c.coeffs()], config.dealias))
    };
    record_at(steps, &v, products.as_ref(), &mut rows, &mut ledger, &mut snapshots)?;

    Ok(TrajectoryRecord {
        config: config.clone(),
        grid,
        initial,
        rows,
        ledger,
        snapshots,
        cfl,
        final_field: v,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rustfft::num_complex::Complex64;

    use super::*;
    use crate::solver::{energy_budget, ViscosityMode};
    use crate::spectral::SpectralScalarField;

    fn small(mode: ViscosityMode) -> RunConfig {
        RunConfig {
            n_h: 16,
            n_v: 16,
            l_h: 8.0 * PI,
            l_v: 2.0 * PI,
            dt: 0.02,
            t_end: 1.0,
            output_every: 0.1,
            mode,
            c0: 0.5,
            ..Default::default()
        }
    }

    #[test]
    fn zero_data_gives_zero_trajectory() {
        let c = small(ViscosityMode::Anisotropic);
        let r = run_from(&c, SpectralVectorField::zeros(c.grid().unwrap())).unwrap();
        assert_eq!(r.rows.len(), 11);
        assert!(r.rows.iter().all(|row| row.values()[1..].iter().all(|&x| x == 0.0)));
        assert!(r.ledger.energy.iter().all(|&e| e == 0.0));
        assert_eq!(energy_budget(&r).max_residual(), 0.0);
    }

    #[test]
    fn runs_are_deterministic() {
        let c = small(ViscosityMode::Anisotropic);
        let (a, b) = (run(&c).unwrap(), run(&c).unwrap());
        let bits = |r: &TrajectoryRecord| -> Vec<u64> {
            r.rows.iter().flat_map(|x| x.values()).map(f64::to_bits).collect()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_eq!(a.ledger, b.ledger);
    }

    #[test]
    fn times_increase_and_cadences_hold() {
        let c = RunConfig {
            snapshot_every: 0.5,
            ..small(ViscosityMode::Anisotropic)
        };
        let r = run(&c).unwrap();
        let t = r.times();
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert!((t[10] - 1.0).abs() < 1e-12);
        assert_eq!(r.ledger.len(), 51);
        assert_eq!(r.snapshots.len(), 3);
        assert!(r.cfl.satisfied);
        assert!(r.initial.is_some());
        assert!(r.series("v3_l2_sq").is_ok());
        assert!(matches!(r.series("nope"), Err(Error::MissingSeries(_))));
    }

    #[test]
    fn linear_single_mode_ledger_is_closed_form() {
        let c = small(ViscosityMode::LinearOnly);
        let g = c.grid().unwrap();
        let a = SpectralScalarField::single_mode(g, [0, 2, 1], Complex64::new(0.3, 0.1));
        let v0 = SpectralVectorField::new([a, SpectralScalarField::zeros(g), SpectralScalarField::zeros(g)]).unwrap();
        let r = run_from(&c, v0).unwrap();
        let kh2 = (2.0 * 2.0 * PI / g.l_h).powi(2);
        let e0 = r.ledger.energy[0];
        for (t, e) in r.ledger.t.iter().zip(&r.ledger.energy) {
            assert!((e / (e0 * (-2.0 * kh2 * t).exp()) - 1.0).abs() < 1e-10);
        }
        let b = energy_budget(&r);
        assert!(b.max_excess() <= 1e-3 * b.max_residual());
    }

    #[test]
    fn nonlinear_energy_identity_and_divergence() {
        let c = small(ViscosityMode::Anisotropic);
        let r = run(&c).unwrap();
        let b = energy_budget(&r);
        assert!(b.max_excess() < 1e-6, "{}", b.max_excess());
        assert!(r.max_divergence() <= 1e-12);
    }

    #[test]
    fn isotropic_dissipates_more() {
        let a = run(&small(ViscosityMode::Anisotropic)).unwrap();
        let i = run(&small(ViscosityMode::Isotropic)).unwrap();
        assert!(i.ledger.energy.last() < a.ledger.energy.last());
    }

    #[test]
    fn observers_see_every_step_with_products() {
        struct Count(usize, usize);
        impl Observer for Count {
            fn observe(&mut self, s: &StepState<'_>) -> Result<()> {
                self.0 += 1;
                self.1 += s.products.is_some() as usize;
                Ok(())
            }
        }
        let c = small(ViscosityMode::Anisotropic);
        let (v0, _) = c.initial_data().unwrap();
        let mut count = Count(0, 0);
        run_observed(&c, v0, &mut [&mut count]).unwrap();
        assert_eq!((count.0, count.1), (51, 51));
    }
}
