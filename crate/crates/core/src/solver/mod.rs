//! Integrating-factor RK4 time stepping, trajectory recording and energy bookkeeping.

mod config;
mod energy;
mod monitor;
mod run;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    leray_in_place, nonlinear_into, products_of, Dealias, Grid3, Products, SpectralVectorField,
};

pub use config::RunConfig;
pub use energy::{energy_budget, EnergyBudget, EnergyLedger};
pub use monitor::{apriori_monitor, MonitorRow};
pub use run::{run, run_from, run_observed, CflAdvisory, Observer, Snapshot, StepState, TrajectoryRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViscosityMode {
    /// `∂t v + P(v.∇v) = Δ_h v`.
    #[default]
    Anisotropic,
    /// `∂t v + P(v.∇v) = Δ v`.
    Isotropic,
    /// `∂t v = Δ_h v`.
    LinearOnly,
}

impl ViscosityMode {
    /// Damping rate of a mode: `|k_h|²`, or `|k|²` in isotropic mode.
    #[inline]
    pub fn symbol(self, k: [f64; 3]) -> f64 {
        let kh2 = k[0] * k[0] + k[1] * k[1];
        match self {
            ViscosityMode::Isotropic => kh2 + k[2] * k[2],
            _ => kh2,
        }
    }

    pub fn is_linear(self) -> bool {
        self == ViscosityMode::LinearOnly
    }

    pub fn name(self) -> &'static str {
        match self {
            ViscosityMode::Anisotropic => "anisotropic",
            ViscosityMode::Isotropic => "isotropic",
            ViscosityMode::LinearOnly => "linear-only",
        }
    }
}

type Triple = [Vec<Complex64>; 3];

fn triple(n: usize) -> Triple {
    std::array::from_fn(|_| vec![Complex64::default(); n])
}

/// Lawson IF-RK4 stepper with preallocated work arrays.
///
/// With `E(τ) = exp(-τ symbol)` and `N = -P(v.∇v)`, one step of size `h` is
///
/// ```text
/// k1 = N(u)
/// k2 = N(E(h/2)(u + h/2 k1))
/// k3 = N(E(h/2)u + h/2 k2)
/// k4 = N(E(h)u + h E(h/2) k3)
/// u' = E(h)u + h/6 (E(h)k1 + 2E(h/2)(k2 + k3) + k4)
/// ```
pub struct Stepper {
    grid: Grid3,
    dt: f64,
    mode: ViscosityMode,
    rule: Dealias,
    symbol: Vec<f64>,
    e_half: Vec<f64>,
    e_full: Vec<f64>,
    acc: Triple,
    stage: Triple,
    nl: Triple,
}

impl Stepper {
    pub fn new(grid: Grid3, dt: f64, mode: ViscosityMode, rule: Dealias) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::param("dt", format!("{dt} must be positive and finite")));
        }
        let w = grid.wavenumbers();
        let mut symbol = Vec::with_capacity(grid.len());
        for i3 in 0..grid.n_v {
            for i2 in 0..grid.n_h {
                for i1 in 0..grid.n_h {
                    symbol.push(mode.symbol([w.k1[i1], w.k2[i2], w.k3[i3]]));
                }
            }
        }
        let e_half = symbol.iter().map(|s| (-0.5 * dt * s).exp()).collect();
        let e_full = symbol.iter().map(|s| (-dt * s).exp()).collect();
        let n = if mode.is_linear() { 0 } else { grid.len() };
        Ok(Self {
            grid,
            dt,
            mode,
            rule,
            symbol,
            e_half,
            e_full,
            acc: triple(n),
            stage: triple(n),
            nl: triple(n),
        })
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn mode(&self) -> ViscosityMode {
        self.mode
    }

    /// Per-mode damping rate in storage order.
    pub fn symbol(&self) -> &[f64] {
        &self.symbol
    }

    /// `(‖v‖², ‖(-Δ_*)^{1/2} v‖²)` with the stepper's damping symbol.
    pub fn energy(&self, v: &SpectralVectorField) -> (f64, f64) {
        energy_of(&self.grid, &self.symbol, v)
    }

    /// Advances `v` from `t` to `t + dt` in place.
    pub fn advance(&mut self, v: &mut SpectralVectorField, t: f64) -> Result<()> {
        self.advance_with(v, t, |_, _| Ok(()))
    }

    /// [`Stepper::advance`], handing the state at `t` and its products (when the
    /// nonlinearity is active) to `hook` before stepping.
    pub(crate) fn advance_with(
        &mut self,
        v: &mut SpectralVectorField,
        t: f64,
        mut hook: impl FnMut(&SpectralVectorField, Option<&Products>) -> Result<()>,
    ) -> Result<()> {
        if *v.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if self.mode.is_linear() {
            hook(v, None)?;
            for i in 0..3 {
                for (a, e) in v.component_mut(i).coeffs_mut().iter_mut().zip(&self.e_full) {
                    *a *= e;
                }
            }
        } else {
            let p = products_of(&self.grid, coeffs(v), self.rule);
            hook(v, Some(&p))?;
            self.rk4(v, p);
            leray_in_place(v);
        }
        for i in 0..3 {
            v.component_mut(i).coeffs_mut()[0] = Complex64::default();
        }
        let finite = v
            .components()
            .iter()
            .all(|c| c.coeffs().iter().all(|a| a.re.is_finite() && a.im.is_finite()));
        if !finite {
            return Err(Error::BlowUp {
                time: t + self.dt,
                reason: "non-finite Fourier coefficients".into(),
            });
        }
        Ok(())
    }

    fn rk4(&mut self, v: &mut SpectralVectorField, k1: Products) {
        let h = self.dt;
        let (eh, ef) = (&self.e_half, &self.e_full);

        // k1: acc = E(h)u + h/6 E(h) k1, stage = E(h/2)(u + h/2 k1)
        nonlinear_into(&k1, split(&mut self.nl));
        drop(k1);
        for i in 0..3 {
            let u = v.component(i).coeffs();
            let (acc, stage, nl) = (&mut self.acc[i], &mut self.stage[i], &self.nl[i]);
            for j in 0..u.len() {
                acc[j] = (u[j] + nl[j] * (h / 6.0)) * ef[j];
                stage[j] = (u[j] + nl[j] * (h / 2.0)) * eh[j];
            }
        }
        eval_stage(&self.grid, self.rule, &self.stage, &mut self.nl);

        // k2: acc += h/3 E(h/2) k2, stage = E(h/2)u + h/2 k2
        for i in 0..3 {
            let u = v.component(i).coeffs();
            let (acc, stage, nl) = (&mut self.acc[i], &mut self.stage[i], &self.nl[i]);
            for j in 0..u.len() {
                acc[j] += nl[j] * (h / 3.0 * eh[j]);
                stage[j] = u[j] * eh[j] + nl[j] * (h / 2.0);
            }
        }
        eval_stage(&self.grid, self.rule, &self.stage, &mut self.nl);

        // k3: acc += h/3 E(h/2) k3, stage = E(h)u + h E(h/2) k3
        for i in 0..3 {
            let u = v.component(i).coeffs();
            let (acc, stage, nl) = (&mut self.acc[i], &mut self.stage[i], &self.nl[i]);
            for j in 0..u.len() {
                let k3 = nl[j] * eh[j];
                acc[j] += k3 * (h / 3.0);
                stage[j] = u[j] * ef[j] + k3 * h;
            }
        }
        eval_stage(&self.grid, self.rule, &self.stage, &mut self.nl);

        // k4: u' = acc + h/6 k4
        for i in 0..3 {
            let u = v.component_mut(i).coeffs_mut();
            let (acc, nl) = (&self.acc[i], &self.nl[i]);
            for j in 0..u.len() {
                u[j] = acc[j] + nl[j] * (h / 6.0);
            }
        }
    }

}

fn eval_stage(grid: &Grid3, rule: Dealias, stage: &Triple, nl: &mut Triple) {
    let [a, b, c] = stage;
    let p = products_of(grid, [a, b, c], rule);
    nonlinear_into(&p, split(nl));
}

pub(crate) fn energy_of(grid: &Grid3, symbol: &[f64], v: &SpectralVectorField) -> (f64, f64) {
    let (mut e, mut d) = (0.0, 0.0);
    for c in v.components() {
        for (a, s) in c.coeffs().iter().zip(symbol) {
            let a2 = a.norm_sqr();
            e += a2;
            d += s * a2;
        }
    }
    let vol = grid.volume();
    (vol * e, vol * d)
}

fn split(t: &mut Triple) -> [&mut [Complex64]; 3] {
    let [a, b, c] = t;
    [a, b, c]
}

fn coeffs(v: &SpectralVectorField) -> [&[Complex64]; 3] {
    let [a, b, c] = v.components();
    [a.coeffs(), b.coeffs(), c.coeffs()]
}

/// One IF-RK4 step of size `dt` from time 0.
pub fn step(v: &SpectralVectorField, dt: f64, mode: ViscosityMode, rule: Dealias) -> Result<SpectralVectorField> {
    let mut stepper = Stepper::new(*v.grid(), dt, mode, rule)?;
    let mut out = v.clone();
    stepper.advance(&mut out, 0.0)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{leray_project, nonlinear_term, signed_mode, SpectralScalarField};
    use crate::testing::band_limited_div_free;

    fn grid16() -> Grid3 {
        Grid3::new(16, 16, 2.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap()
    }

    #[test]
    fn zero_field_stays_zero() {
        let g = grid16();
        let v = SpectralVectorField::zeros(g);
        for mode in [ViscosityMode::Anisotropic, ViscosityMode::Isotropic, ViscosityMode::LinearOnly] {
            let w = step(&v, 0.1, mode, Dealias::TwoThirds).unwrap();
            assert_eq!(w.max_abs(), 0.0);
        }
    }

    #[test]
    fn linear_mode_matches_semigroup() {
        let g = grid16();
        let v0 = band_limited_div_free(&g, 3, 1.0);
        let dt = 0.01;
        let mut st = Stepper::new(g, dt, ViscosityMode::LinearOnly, Dealias::TwoThirds).unwrap();
        let mut v = v0.clone();
        let steps = 500;
        for n in 0..steps {
            st.advance(&mut v, n as f64 * dt).unwrap();
        }
        let t = steps as f64 * dt;
        let w = g.wavenumbers();
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            let (a, b) = (v0.component(i).coeffs(), v.component(i).coeffs());
            for idx in 0..g.len() {
                let [i1, i2, _] = g.unravel(idx);
                let exact = a[idx] * (-t * w.kh_sq(i1, i2)).exp();
                if exact.norm() > 0.0 {
                    worst = worst.max((b[idx] - exact).norm() / exact.norm());
                }
            }
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn plane_kh_zero_is_undamped_in_linear_mode() {
        let g = grid16();
        let a = SpectralScalarField::single_mode(g, [0, 0, 2], Complex64::new(1.0, 0.0));
        let v = SpectralVectorField::new([a, SpectralScalarField::zeros(g), SpectralScalarField::zeros(g)]).unwrap();
        let w = step(&v, 0.5, ViscosityMode::LinearOnly, Dealias::TwoThirds).unwrap();
        assert_eq!(w.sub(&v).unwrap().max_abs(), 0.0);
        let w = step(&v, 0.5, ViscosityMode::Isotropic, Dealias::TwoThirds).unwrap();
        assert!((w.component(0).l2_sq() / v.component(0).l2_sq() - (-4.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn step_preserves_divergence_and_mean() {
        let g = grid16();
        let v = band_limited_div_free(&g, 7, 2.0);
        let w = step(&v, 0.02, ViscosityMode::Anisotropic, Dealias::TwoThirds).unwrap();
        assert!(w.divergence_max() <= 1e-12 * w.max_abs());
        for c in w.components() {
            assert_eq!(c.coeffs()[0], Complex64::default());
        }
        assert!(w.hermitian_defect() < 1e-13);
    }

    /// Random divergence-free field on modes with `|m_i| <= 2`.
    fn smooth_field(g: &Grid3, amplitude: f64) -> SpectralVectorField {
        let v = band_limited_div_free(g, 11, 1.0);
        let comps = v.into_components().map(|mut c| {
            for idx in 0..g.len() {
                let [i1, i2, i3] = g.unravel(idx);
                let m = [signed_mode(i1, g.n_h), signed_mode(i2, g.n_h), signed_mode(i3, g.n_v)];
                if m.iter().any(|x| x.abs() > 2) {
                    c.coeffs_mut()[idx] = Complex64::default();
                }
            }
            c
        });
        let v = leray_project(&SpectralVectorField::new(comps).unwrap());
        let m = v.max_abs();
        v.scaled(amplitude / m)
    }

    #[test]
    fn one_step_error_is_fifth_order() {
        // Reference: many small steps; compare single steps of size h and h/2.
        let g = grid16();
        let v = smooth_field(&g, 0.1);
        let reference = |h: f64| {
            let mut st = Stepper::new(g, h / 64.0, ViscosityMode::Anisotropic, Dealias::TwoThirds).unwrap();
            let mut u = v.clone();
            for n in 0..64 {
                st.advance(&mut u, n as f64 * h / 64.0).unwrap();
            }
            u
        };
        let err = |h: f64| {
            let one = step(&v, h, ViscosityMode::Anisotropic, Dealias::TwoThirds).unwrap();
            one.sub(&reference(h)).unwrap().l2_sq().sqrt()
        };
        let (e1, e2) = (err(0.04), err(0.02));
        let ratio = e1 / e2;
        assert!((20.0..45.0).contains(&ratio), "ratio {ratio} ({e1:e} / {e2:e})");
    }

    #[test]
    fn first_stage_is_the_nonlinear_term() {
        let g = grid16();
        let v = band_limited_div_free(&g, 5, 1.0);
        let mut st = Stepper::new(g, 0.01, ViscosityMode::Anisotropic, Dealias::TwoThirds).unwrap();
        let mut u = v.clone();
        let mut seen = None;
        st.advance_with(&mut u, 0.0, |_, p| {
            seen = Some(crate::spectral::nonlinear_from_products(p.unwrap()));
            Ok(())
        })
        .unwrap();
        let n = nonlinear_term(&v, Dealias::TwoThirds);
        assert!(seen.unwrap().sub(&n).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn non_finite_input_is_a_blow_up() {
        let g = grid16();
        let mut v = band_limited_div_free(&g, 5, 1.0);
        v.component_mut(0).coeffs_mut()[1] = Complex64::new(f64::NAN, 0.0);
        let err = step(&v, 0.01, ViscosityMode::LinearOnly, Dealias::TwoThirds).unwrap_err();
        assert!(matches!(err, Error::BlowUp { .. }));
    }
}
