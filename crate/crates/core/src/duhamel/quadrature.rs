//! `‖v³_L(t)‖²` on ℝ³ by adaptive Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::decay::{fit_power_law, DecayFit};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.error == o.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn g7k15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Panel {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).abs(),
    }
}

/// Globally adaptive G7K15 on `[a, b]` until the summed error estimate is below
/// `max(abs_tol, rel_tol |I|)`.
pub fn integrate(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    const MAX_PANELS: usize = 4000;
    let mut heap = BinaryHeap::new();
    let first = g7k15(&mut f, a, b);
    let (mut value, mut error) = (first.value, first.error);
    heap.push(first);
    let mut evaluations = 15;
    while error > abs_tol.max(rel_tol * value.abs()) {
        if heap.len() >= MAX_PANELS {
            return Err(Error::Quadrature(format!(
                "error estimate {error:e} above tolerance after {MAX_PANELS} panels on [{a}, {b}]"
            )));
        }
        let worst = heap.pop().expect("nonempty heap");
        let m = 0.5 * (worst.a + worst.b);
        let (l, r) = (g7k15(&mut f, worst.a, m), g7k15(&mut f, m, worst.b));
        evaluations += 30;
        value += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        if !value.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
        }
        heap.push(l);
        heap.push(r);
        // Re-sum to keep cancellation from drifting the running totals.
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Integral {
        value,
        error,
        evaluations,
    })
}

/// Axisymmetric data `|v̂0³(ξ)|²` as a function of `ρ = |ξ_h|` and `ξ3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuadratureProfile {
    /// `|v̂0³|² = ρ^{2a} e^{-|ξ|²}`, prescribed directly.
    Gaussian { a: f64 },
    /// Horizontal part along `ξ_h` with `|v̂0^h|² = |ξ|^{2γ} cos^{2μ}θ sin^{2ν}θ e^{-|ξ|²}`,
    /// `cos θ = |ξ3|/|ξ|`, and `v̂0³ = -ξ_h.v̂0^h / ξ3` from `div v0 = 0`.
    DivFree { gamma: f64, mu: f64, nu: f64 },
}

impl QuadratureProfile {
    /// Div-free profile with `v0 ∈ Ḣ^{-s,-s/2-1/4}` by a margin `delta` in both the
    /// radial and the `ξ3 → 0` conditions.
    pub fn near_critical(s: f64, delta: f64) -> Self {
        QuadratureProfile::DivFree {
            gamma: 1.5 * s - 1.25 + delta,
            mu: 0.5 * s + 0.75 + delta,
            nu: 2.0,
        }
    }

    pub fn is_div_free(&self) -> bool {
        matches!(self, QuadratureProfile::DivFree { .. })
    }

    /// `ln |v̂0³|²` at `(ln ρ, ln |ξ3|)`.
    fn ln_density(&self, u: f64, w: f64) -> f64 {
        let (rho, z) = (u.exp(), w.exp());
        let r2 = rho * rho + z * z;
        match *self {
            QuadratureProfile::Gaussian { a } => 2.0 * a * u - r2,
            QuadratureProfile::DivFree { gamma, mu, nu } => {
                let lr = 0.5 * r2.ln();
                2.0 * (u - w) + 2.0 * gamma * lr + 2.0 * mu * (w - lr) + 2.0 * nu * (u - lr) - r2
            }
        }
    }

    /// Smallest exponent `p + 1` of the power behaviour `x^p` of the integrand near
    /// `ρ = 0` or `ξ3 = 0`.
    fn margin(&self) -> f64 {
        match *self {
            QuadratureProfile::Gaussian { a } => 2.0 * a + 2.0,
            QuadratureProfile::DivFree { gamma, mu, nu } => {
                (2.0 * gamma + 3.0).min(2.0 * mu - 1.0).min(2.0 * nu + 4.0)
            }
        }
    }

    /// Checks `‖v0³‖ < ∞`, and for div-free profiles `v0 ∈ Ḣ^{-s,-s/2-1/4}`.
    pub fn check(&self, s: f64) -> Result<()> {
        let fail = |what: String| Err(Error::NonIntegrable(what));
        match *self {
            QuadratureProfile::Gaussian { a } => {
                if !(a > -1.0) {
                    return fail(format!("a = {a} must exceed -1 for v0³ ∈ L²"));
                }
            }
            QuadratureProfile::DivFree { gamma, mu, nu } => {
                if !(gamma > -1.5) {
                    return fail(format!("γ = {gamma} must exceed -3/2 for v0 ∈ L²"));
                }
                if !(mu > 0.5) {
                    return fail(format!("μ = {mu} must exceed 1/2 for v0³ ∈ L²"));
                }
                if !(nu > -2.0) {
                    return fail(format!("ν = {nu} must exceed -2 for v0³ ∈ L²"));
                }
                let g_min = 1.5 * s - 1.25;
                if !(gamma > g_min) {
                    return fail(format!("γ = {gamma} must exceed 3s/2 - 5/4 = {g_min} for v0 ∈ Ḣ^(-s,-s/2-1/4)"));
                }
                let m_min = 0.5 * s + 0.75;
                if !(mu > m_min) {
                    return fail(format!("μ = {mu} must exceed s/2 + 3/4 = {m_min} for v0³ ∈ Ḣ^(-s,-s/2-1/4)"));
                }
                let n_min = s - 1.0;
                if !(nu > n_min) {
                    return fail(format!("ν = {nu} must exceed s - 1 = {n_min} for v0^h ∈ Ḣ^(-s,-s/2-1/4)"));
                }
            }
        }
        Ok(())
    }

    /// `∫_{ℝ³} e^{-2t|ξ_h|²} |v̂0³(ξ)|² dξ` to relative `rel_tol`.
    ///
    /// Cylindrical coordinates, then `ρ = e^u`, `ξ3 = e^w` on `[x_lo, 12]`, which turns
    /// power singularities at the axes into exponential tails. `x_lo` is chosen so the
    /// dropped strip is below `e^{-40}` relative.
    pub fn v3_norm_sq(&self, t: f64, rel_tol: f64) -> Result<f64> {
        let margin = self.margin();
        if !(margin > 0.0) {
            return Err(Error::NonIntegrable(format!("profile {self:?} is not square integrable")));
        }
        let lo = -(40.0 / margin).clamp(40.0, 400.0);
        let hi = 12.0f64.ln();
        let inner_tol = rel_tol * 1e-2;
        let mut failure = None;
        let outer = integrate(
            |w| {
                let inner = integrate(
                    |u| {
                        let rho = u.exp();
                        (2.0 * u + w + self.ln_density(u, w) - 2.0 * t * rho * rho).exp()
                    },
                    lo,
                    hi,
                    0.0,
                    inner_tol,
                );
                match inner {
                    Ok(i) => i.value,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            lo,
            hi,
            0.0,
            rel_tol * 0.5,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        // 2π from the angle, 2 from ξ3 < 0.
        Ok(4.0 * PI * outer.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearDecay {
    pub profile: QuadratureProfile,
    pub s: f64,
    pub times: Vec<f64>,
    pub norm_sq: Vec<f64>,
    /// Fit over the positive times, when there are enough of them.
    pub fit: Option<DecayFit>,
    /// `-(3s/2 + 1/4)`, the bound for div-free data in `Ḣ^{-s,-s/2-1/4}`.
    pub target: f64,
}

/// Relative accuracy of every quadrature value.
pub const QUADRATURE_REL_TOL: f64 = 1e-8;

/// `‖v³_L(t)‖²` at each time for the linear flow `e^{tΔ_h}` on ℝ³.
pub fn linear_decay_quadrature(profile: &QuadratureProfile, s: f64, times: &[f64]) -> Result<LinearDecay> {
    profile.check(s)?;
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::param("times", format!("{t} must be finite and nonnegative")));
    }
    let norm_sq = times
        .iter()
        .map(|&t| profile.v3_norm_sq(t, QUADRATURE_REL_TOL))
        .collect::<Result<Vec<_>>>()?;
    let positive: Vec<(f64, f64)> = times
        .iter()
        .zip(&norm_sq)
        .filter(|(t, _)| **t > 0.0)
        .map(|(t, y)| (*t, *y))
        .collect();
    let fit = if positive.len() >= crate::decay::MIN_SAMPLES {
        let (t, y): (Vec<f64>, Vec<f64>) = positive.into_iter().unzip();
        let window = (t.iter().copied().fold(f64::INFINITY, f64::min), t.iter().copied().fold(0.0, f64::max));
        Some(fit_power_law("v3_l_sq", &t, &y, window)?)
    } else {
        None
    };
    Ok(LinearDecay {
        profile: *profile,
        s,
        times: times.to_vec(),
        norm_sq,
        fit,
        target: -(1.5 * s + 0.25),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_on_smooth_and_singular_integrands() {
        let i = integrate(|x| x.cos(), 0.0, 1.0, 0.0, 1e-14).unwrap();
        assert!((i.value - 1f64.sin()).abs() < 1e-14);
        let i = integrate(|x| x.powf(-0.5), 0.0, 1.0, 0.0, 1e-10).unwrap();
        assert!((i.value - 2.0).abs() < 1e-9);
    }

    /// `π^{3/2} Γ(a+1) (1+2t)^{-(a+1)}`.
    fn gaussian(a: f64, t: f64) -> f64 {
        let gamma = match a {
            x if x == 0.5 => PI.sqrt() / 2.0,
            x if x == 1.0 => 1.0,
            x if x == 1.5 => 0.75 * PI.sqrt(),
            _ => unreachable!(),
        };
        PI.powf(1.5) * gamma * (1.0 + 2.0 * t).powf(-(a + 1.0))
    }

    #[test]
    fn gaussian_profile_matches_closed_form() {
        for a in [0.5, 1.0, 1.5] {
            let p = QuadratureProfile::Gaussian { a };
            for t in [0.0, 0.3, 10.0, 1000.0] {
                let q = p.v3_norm_sq(t, 1e-9).unwrap();
                let e = gaussian(a, t);
                assert!((q / e - 1.0).abs() < 1e-8, "a = {a}, t = {t}: {q} vs {e}");
            }
        }
    }

    #[test]
    fn div_free_profile_matches_spherical_reduction() {
        // γ = 1/2: ∫ r^{2+2γ} e^{-r²(1+2t sin²θ)} dr = Γ(2)/2 (1+2t sin²θ)^{-2}; the angular
        // integral is done by composite Simpson.
        let (gamma, mu, nu) = (0.5, 1.5, 2.0);
        let p = QuadratureProfile::DivFree { gamma, mu, nu };
        for t in [0.0, 5.0, 200.0] {
            let n = 200_000;
            let h = 0.5 * PI / n as f64;
            let f = |th: f64| {
                let (s, c) = th.sin_cos();
                let tan2 = if c == 0.0 { 0.0 } else { (s / c).powi(2) };
                s * tan2 * c.powf(2.0 * mu) * s.powf(2.0 * nu) * 0.5 * (1.0 + 2.0 * t * s * s).powf(-(gamma + 1.5))
            };
            let mut sum = f(0.0) + f(0.5 * PI);
            for i in 1..n {
                sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let oracle = 4.0 * PI * sum * h / 3.0;
            let q = p.v3_norm_sq(t, 1e-9).unwrap();
            assert!((q / oracle - 1.0).abs() < 1e-8, "t = {t}: {q} vs {oracle}");
        }
    }

    #[test]
    fn membership_conditions_are_named() {
        let s = 0.6;
        let bad = QuadratureProfile::DivFree { gamma: 1.5 * s - 1.25, mu: 2.0, nu: 2.0 };
        match bad.check(s) {
            Err(Error::NonIntegrable(m)) => assert!(m.contains("γ")),
            r => panic!("{r:?}"),
        }
        let bad = QuadratureProfile::DivFree { gamma: 0.0, mu: 0.5 * s + 0.75, nu: 2.0 };
        match bad.check(s) {
            Err(Error::NonIntegrable(m)) => assert!(m.contains("μ")),
            r => panic!("{r:?}"),
        }
        assert!(QuadratureProfile::Gaussian { a: -1.0 }.check(s).is_err());
        assert!(QuadratureProfile::near_critical(s, 0.02).check(s).is_ok());
    }

    #[test]
    fn t_zero_is_the_data_norm() {
        let p = QuadratureProfile::Gaussian { a: 1.0 };
        let d = linear_decay_quadrature(&p, 0.5, &[0.0]).unwrap();
        assert!((d.norm_sq[0] / gaussian(1.0, 0.0) - 1.0).abs() < 1e-8);
        assert!(d.fit.is_none());
    }
}
