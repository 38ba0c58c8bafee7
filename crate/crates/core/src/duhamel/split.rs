use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::solver::{Observer, Snapshot, StepState, ViscosityMode};
use crate::spectral::{products, Dealias, Grid3, SpectralScalarField};

use super::kernels::kernels_into;

/// `v³(t) = v³_L + v³_N1 + v³_N2` at one time.
#[derive(Debug, Clone)]
pub struct DuhamelSplit {
    pub t: f64,
    /// `e^{-t symbol} v̂³(0)`
    pub v3_l: SpectralScalarField,
    pub v3_n1: SpectralScalarField,
    pub v3_n2: SpectralScalarField,
    /// `‖v3_l + v3_n1 + v3_n2 - v³(t)‖ / ‖v³(t)‖`
    pub residual: f64,
}

fn symbols(grid: &Grid3, mode: ViscosityMode) -> Vec<f64> {
    let w = grid.wavenumbers();
    (0..grid.len())
        .map(|idx| {
            let [i1, i2, i3] = grid.unravel(idx);
            mode.symbol([w.k1[i1], w.k2[i2], w.k3[i3]])
        })
        .collect()
}

/// Largest damping rate a node spacing `h` must resolve: `h max symbol <= 1` over the
/// modes the kernels can reach.
fn check_cadence(grid: &Grid3, mode: ViscosityMode, rule: Dealias, h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::param("cadence", format!("{h} must be positive")));
    }
    let w = grid.wavenumbers();
    let mut worst: f64 = 0.0;
    for i3 in 0..grid.n_v {
        for i2 in 0..grid.n_h {
            for i1 in 0..grid.n_h {
                if rule == Dealias::TwoThirds && !w.in_band(i1, i2, i3) {
                    continue;
                }
                worst = worst.max(mode.symbol([w.k1[i1], w.k2[i2], w.k3[i3]]));
            }
        }
    }
    if h * worst > 1.0 {
        return Err(Error::InsufficientCadence {
            spacing: h,
            required: 1.0 / worst,
        });
    }
    Ok(())
}

fn rel_residual(l: &[Complex64], n1: &[Complex64], n2: &[Complex64], v3: &[Complex64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..v3.len() {
        num += (l[i] + n1[i] + n2[i] - v3[i]).norm_sqr();
        den += v3[i].norm_sqr();
    }
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Streaming trapezoid quadrature of the Duhamel integrals at nodes `t_n = n h`,
/// attached to a run as an [`Observer`]:
///
/// ```text
/// I_{n+1} = E (I_n + h/2 F(t_n)) + h/2 F(t_{n+1}),   E = e^{-h symbol}
/// ```
///
/// The heat factor is exact at the nodes; only `F` is interpolated.
pub struct DuhamelAccumulator {
    grid: Grid3,
    mode: ViscosityMode,
    h: f64,
    stride: usize,
    symbol: Vec<f64>,
    decay: Vec<f64>,
    v3_0: Vec<Complex64>,
    i1: Vec<Complex64>,
    i2: Vec<Complex64>,
    f1: Vec<Complex64>,
    f2: Vec<Complex64>,
    nodes: usize,
    last_t: f64,
    last_v3: Vec<Complex64>,
    residuals: Vec<(f64, f64)>,
}

impl DuhamelAccumulator {
    /// Nodes every `stride` steps of size `dt`.
    pub fn new(grid: Grid3, mode: ViscosityMode, rule: Dealias, dt: f64, stride: usize) -> Result<Self> {
        if stride == 0 {
            return Err(Error::param("stride", "must be at least 1"));
        }
        let h = dt * stride as f64;
        check_cadence(&grid, mode, rule, h)?;
        let symbol = symbols(&grid, mode);
        let decay = symbol.iter().map(|s| (-h * s).exp()).collect();
        let z = vec![Complex64::default(); grid.len()];
        Ok(Self {
            grid,
            mode,
            h,
            stride,
            symbol,
            decay,
            v3_0: z.clone(),
            i1: z.clone(),
            i2: z.clone(),
            f1: z.clone(),
            f2: z.clone(),
            nodes: 0,
            last_t: 0.0,
            last_v3: z,
            residuals: Vec::new(),
        })
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    /// `(t_n, residual)` at every node so far.
    pub fn residuals(&self) -> &[(f64, f64)] {
        &self.residuals
    }

    /// Largest residual over nodes with `t >= t_min`.
    pub fn max_residual_after(&self, t_min: f64) -> f64 {
        self.residuals
            .iter()
            .filter(|(t, _)| *t >= t_min)
            .map(|(_, r)| *r)
            .fold(0.0, f64::max)
    }

    fn linear_part(&self, t: f64) -> Vec<Complex64> {
        self.v3_0
            .iter()
            .zip(&self.symbol)
            .map(|(a, s)| a * (-t * s).exp())
            .collect()
    }

    /// The split at the latest node.
    pub fn split(&self) -> Result<DuhamelSplit> {
        if self.nodes == 0 {
            return Err(Error::param("accumulator", "no nodes observed"));
        }
        let l = self.linear_part(self.last_t);
        let residual = rel_residual(&l, &self.i1, &self.i2, &self.last_v3);
        let field = |c: Vec<Complex64>| SpectralScalarField::from_coeffs(self.grid, c).expect("grid-sized");
        Ok(DuhamelSplit {
            t: self.last_t,
            v3_l: field(l),
            v3_n1: field(self.i1.clone()),
            v3_n2: field(self.i2.clone()),
            residual,
        })
    }

    fn node(&mut self, t: f64, v3: &[Complex64], kernels: Option<(&[Complex64], &[Complex64])>) {
        let half = 0.5 * self.h;
        let zero = Complex64::default();
        if self.nodes == 0 {
            self.v3_0.copy_from_slice(v3);
        } else {
            for j in 0..v3.len() {
                let e = self.decay[j];
                let (g1, g2) = kernels.map_or((zero, zero), |(a, b)| (a[j], b[j]));
                self.i1[j] = (self.i1[j] + self.f1[j] * half) * e + g1 * half;
                self.i2[j] = (self.i2[j] + self.f2[j] * half) * e + g2 * half;
            }
        }
        match kernels {
            Some((a, b)) => {
                self.f1.copy_from_slice(a);
                self.f2.copy_from_slice(b);
            }
            None => {
                self.f1.fill(zero);
                self.f2.fill(zero);
            }
        }
        self.nodes += 1;
        self.last_t = t;
        self.last_v3.copy_from_slice(v3);
        let l = self.linear_part(t);
        let r = rel_residual(&l, &self.i1, &self.i2, v3);
        self.residuals.push((t, r));
    }
}

impl Observer for DuhamelAccumulator {
    fn observe(&mut self, state: &StepState<'_>) -> Result<()> {
        if state.step % self.stride != 0 {
            return Ok(());
        }
        if *state.v.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let v3 = state.v.component(2).coeffs();
        match (self.mode.is_linear(), state.products) {
            (false, Some(p)) => {
                let mut k1 = vec![Complex64::default(); self.grid.len()];
                let mut k2 = vec![Complex64::default(); self.grid.len()];
                kernels_into(p, &mut k1, &mut k2);
                self.node(state.t, v3, Some((&k1, &k2)));
            }
            _ => self.node(state.t, v3, None),
        }
        Ok(())
    }
}

/// Split of `v³` at time `t` from snapshots at uniform spacing starting at `t = 0`.
pub fn reconstruct_v3(
    snapshots: &[Snapshot],
    mode: ViscosityMode,
    rule: Dealias,
    t: f64,
) -> Result<DuhamelSplit> {
    if snapshots.len() < 2 {
        return Err(Error::param("snapshots", "need at least two snapshots"));
    }
    let h = snapshots[1].t - snapshots[0].t;
    if snapshots[0].t != 0.0 {
        return Err(Error::param("snapshots", "first snapshot must be at t = 0"));
    }
    for (n, s) in snapshots.iter().enumerate() {
        if (s.t - n as f64 * h).abs() > 1e-9 * h.max(s.t) {
            return Err(Error::param("snapshots", format!("spacing is not uniform at t = {}", s.t)));
        }
    }
    let last = ((t / h).round()) as usize;
    if last >= snapshots.len() || (snapshots[last].t - t).abs() > 1e-9 * h.max(t) {
        return Err(Error::param("t", format!("{t} is not a snapshot time")));
    }
    let grid = *snapshots[0].v.grid();
    let mut acc = DuhamelAccumulator::new(grid, mode, rule, h, 1)?;
    for (n, s) in snapshots[..=last].iter().enumerate() {
        if *s.v.grid() != grid {
            return Err(Error::GridMismatch);
        }
        let p = if mode.is_linear() { None } else { Some(products(&s.v, rule)) };
        acc.observe(&StepState {
            step: n,
            t: s.t,
            v: &s.v,
            products: p.as_ref(),
        })?;
    }
    acc.split()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::solver::{run, run_observed, RunConfig};

    fn config(mode: ViscosityMode) -> RunConfig {
        RunConfig {
            n_h: 16,
            n_v: 16,
            l_h: 8.0 * PI,
            l_v: 2.0 * PI,
            dt: 0.01,
            t_end: 2.0,
            output_every: 0.1,
            snapshot_every: 0.1,
            mode,
            c0: 0.5,
            ..Default::default()
        }
    }

    #[test]
    fn linear_run_has_no_nonlinear_part() {
        let r = run(&config(ViscosityMode::LinearOnly)).unwrap();
        let s = reconstruct_v3(&r.snapshots, ViscosityMode::LinearOnly, Dealias::TwoThirds, 2.0).unwrap();
        assert_eq!(s.v3_n1.max_abs() + s.v3_n2.max_abs(), 0.0);
        assert!(s.residual < 1e-13, "{}", s.residual);
    }

    #[test]
    fn streaming_matches_snapshots_and_converges() {
        let c = config(ViscosityMode::Anisotropic);
        let (v0, _) = c.initial_data().unwrap();
        let g = c.grid().unwrap();
        let mut coarse = DuhamelAccumulator::new(g, c.mode, c.dealias, c.dt, 10).unwrap();
        let mut fine = DuhamelAccumulator::new(g, c.mode, c.dealias, c.dt, 5).unwrap();
        let r = run_observed(&c, v0, &mut [&mut coarse, &mut fine]).unwrap();
        let s = reconstruct_v3(&r.snapshots, c.mode, c.dealias, 2.0).unwrap();
        let a = coarse.split().unwrap();
        assert!((a.residual - s.residual).abs() <= 1e-12 * s.residual.max(1e-300) + 1e-15);
        let (rc, rf) = (coarse.max_residual_after(0.0), fine.max_residual_after(0.0));
        let ratio = rc / rf;
        assert!((3.0..5.0).contains(&ratio), "{rc:e} / {rf:e} = {ratio}");
    }

    #[test]
    fn coarse_cadence_is_rejected() {
        let g = Grid3::new(16, 16, 2.0 * PI, 2.0 * PI).unwrap();
        match DuhamelAccumulator::new(g, ViscosityMode::Isotropic, Dealias::TwoThirds, 0.1, 1) {
            Err(Error::InsufficientCadence { spacing, required }) => {
                assert_eq!(spacing, 0.1);
                assert!(required < 0.1);
            }
            Err(e) => panic!("{e}"),
            Ok(_) => panic!("accepted a coarse cadence"),
        }
    }
}
