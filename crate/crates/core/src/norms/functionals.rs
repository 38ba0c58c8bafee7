use serde::{Deserialize, Serialize};

use super::sobolev::{aniso_sobolev_norm, b0half_norm};
use crate::error::{Error, Result};
use crate::littlewood_paley::{BlockDirection, DyadicFilterBank};
use crate::spectral::{derivative, SpectralVectorField};

/// `(1 + 3 s1) / (10 (s1 - 1))`, the lower end of the admissible `s` interval.
pub fn gate_lower_bound(s1: f64) -> f64 {
    (1.0 + 3.0 * s1) / (10.0 * (s1 - 1.0))
}

/// The lower bound for `s1 = p / q` as a reduced fraction `(num, den)`, `den > 0`.
pub fn gate_lower_bound_rational(p: i64, q: i64) -> Result<(i64, i64)> {
    if q == 0 || p == q {
        return Err(Error::param("s1", format!("{p}/{q} has no gate")));
    }
    // (1 + 3p/q) / (10 (p/q - 1)) = (q + 3p) / (10 (p - q))
    let (mut n, mut d) = (q + 3 * p, 10 * (p - q));
    if d < 0 {
        n = -n;
        d = -d;
    }
    let g = gcd(n.unsigned_abs(), d.unsigned_abs()) as i64;
    Ok((n / g, d / g))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// `s1 > 2` and `s ∈ ((1 + 3 s1) / (10 (s1 - 1)), 1)`, both ends open.
pub fn parameter_gate(s: f64, s1: f64) -> Result<()> {
    let lower = gate_lower_bound(s1);
    let ok = s.is_finite() && s1.is_finite() && s1 > 2.0 && s > lower && s < 1.0;
    if ok {
        Ok(())
    } else {
        Err(Error::ParameterGate { s, s1, lower })
    }
}

/// The data functionals of the decay bounds for one initial field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialDataReport {
    pub s: f64,
    pub s1: f64,
    /// `‖v0‖²`
    pub l2_sq: f64,
    /// `‖v0‖²_{Ḣ^{-s,0}}`
    pub hneg_s_sq: f64,
    /// `‖v0³‖²`
    pub v3_l2_sq: f64,
    /// `‖v0‖²_{Ḣ^{-s,-s/2-1/4}}`
    pub hneg_s_mixed_sq: f64,
    /// `‖∂3 v0‖²_{Ḣ^{-1/2,0}}`
    pub d3_hneg_half_sq: f64,
    /// `‖∂3 v0‖²`
    pub d3_l2_sq: f64,
    /// `‖v0‖²_{Ḣ^{0,s1}}`
    pub h0s1_sq: f64,
    pub a_s: f64,
    pub b_s: f64,
    pub e0: f64,
    /// `‖v0‖_{B^{0,1/2}}`
    pub c0_norm: f64,
    /// Squared `L²` mass the negative-index norms had to drop; zero for admissible data.
    pub excluded_l2_sq: f64,
    pub divergence_defect: f64,
}

impl InitialDataReport {
    /// Largest relative mismatch between the stored `A_s`, `B_s`, `E_0` and their
    /// recomputation from the stored component norms.
    pub fn identity_defect(&self) -> f64 {
        let a = self.l2_sq + self.hneg_s_sq;
        let b = self.v3_l2_sq + self.hneg_s_mixed_sq + a.powf(1.5);
        let e = self.d3_hneg_half_sq + self.h0s1_sq * (a * b).powf(e0_power(self.s1));
        let rel = |x: f64, y: f64| if y == 0.0 { x.abs() } else { ((x - y) / y).abs() };
        rel(self.a_s, a).max(rel(self.b_s, b)).max(rel(self.e0, e))
    }
}

fn e0_power(s1: f64) -> f64 {
    (s1 - 1.0) / (3.0 * s1 - 2.0)
}

/// `A_s`, `B_s`, `E_0` and `‖v0‖_{B^{0,1/2}}` after the parameter gate.
pub fn data_functionals(v0: &SpectralVectorField, s: f64, s1: f64) -> Result<InitialDataReport> {
    parameter_gate(s, s1)?;
    let defect = v0.divergence_defect();
    if defect > 1e-10 {
        return Err(Error::param("v0", format!("not divergence-free (relative defect {defect:e})")));
    }
    let g = *v0.grid();
    let bank = DyadicFilterBank::for_grid(g, BlockDirection::Vertical)?;
    let l2_sq = v0.l2_sq();
    let hneg = aniso_sobolev_norm(v0, -s, 0.0)?;
    let v3_l2_sq = v0.component(2).l2_sq();
    let mixed = aniso_sobolev_norm(v0, -s, -s / 2.0 - 0.25)?;
    let d3 = SpectralVectorField::new(std::array::from_fn(|i| derivative(v0.component(i), 2)))?;
    let d3_hneg = aniso_sobolev_norm(&d3, -0.5, 0.0)?;
    let h0s1_sq = aniso_sobolev_norm(v0, 0.0, s1)?.squared;
    let a_s = l2_sq + hneg.squared;
    let b_s = v3_l2_sq + mixed.squared + a_s.powf(1.5);
    let e0 = d3_hneg.squared + h0s1_sq * (a_s * b_s).powf(e0_power(s1));
    Ok(InitialDataReport {
        s,
        s1,
        l2_sq,
        hneg_s_sq: hneg.squared,
        v3_l2_sq,
        hneg_s_mixed_sq: mixed.squared,
        d3_hneg_half_sq: d3_hneg.squared,
        d3_l2_sq: d3.l2_sq(),
        h0s1_sq,
        a_s,
        b_s,
        e0,
        c0_norm: b0half_norm(v0, &bank)?,
        excluded_l2_sq: hneg.excluded_l2_sq + mixed.excluded_l2_sq + d3_hneg.excluded_l2_sq,
        divergence_defect: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{signed_mode, Grid3};
    use crate::testing::band_limited_div_free;

    #[test]
    fn gate_for_s1_four() {
        assert_eq!(gate_lower_bound_rational(4, 1).unwrap(), (13, 30));
        assert_eq!(gate_lower_bound(4.0), 13.0 / 30.0);
        assert!(parameter_gate(13.0 / 30.0, 4.0).is_err());
        assert!(parameter_gate(1.0, 4.0).is_err());
        assert!(parameter_gate(0.4, 4.0).is_err());
        assert!(parameter_gate(13.0 / 30.0 + 1e-6, 4.0).is_ok());
        assert!(parameter_gate(0.9, 2.0).is_err());
        assert!(matches!(parameter_gate(0.4, 4.0), Err(Error::ParameterGate { .. })));
    }

    #[test]
    fn rational_gate_matches_float_formula() {
        for (p, q) in [(5, 2), (3, 1), (7, 3), (9, 4), (4, 1), (11, 5)] {
            let (n, d) = gate_lower_bound_rational(p, q).unwrap();
            let s1 = p as f64 / q as f64;
            assert!((n as f64 / d as f64 - gate_lower_bound(s1)).abs() <= 1e-15);
        }
    }

    #[test]
    fn zero_data_gives_zero_functionals() {
        let g = Grid3::cube(8).unwrap();
        let r = data_functionals(&SpectralVectorField::zeros(g), 0.5, 4.0).unwrap();
        assert_eq!((r.a_s, r.b_s, r.e0, r.c0_norm), (0.0, 0.0, 0.0, 0.0));
        assert!(data_functionals(&SpectralVectorField::zeros(g), 0.4, 4.0).is_err());
    }

    #[test]
    fn functionals_match_direct_sums() {
        let g = Grid3::new(16, 8, 9.0, 4.0).unwrap();
        let mut v = band_limited_div_free(&g, 21, 0.01);
        // clear the singular planes so every functional is a plain sum
        for c in 0..3 {
            let coeffs = v.component_mut(c).coeffs_mut();
            for (idx, z) in coeffs.iter_mut().enumerate() {
                let [a, b, k] = g.unravel(idx);
                if (a == 0 && b == 0) || k == 0 {
                    *z = Default::default();
                }
            }
        }
        let (s, s1) = (0.6, 4.0);
        let r = data_functionals(&v, s, s1).unwrap();
        assert_eq!(r.excluded_l2_sq, 0.0);
        assert!(r.identity_defect() <= 1e-14);

        let (mut l2, mut hn, mut v3, mut mixed) = (0.0, 0.0, 0.0, 0.0);
        let two_pi = 2.0 * std::f64::consts::PI;
        for idx in 0..g.len() {
            let [a, b, k] = g.unravel(idx);
            let kh = (two_pi * signed_mode(a, g.n_h) as f64 / g.l_h)
                .hypot(two_pi * signed_mode(b, g.n_h) as f64 / g.l_h);
            let kv = (two_pi * signed_mode(k, g.n_v) as f64 / g.l_v).abs();
            let e: f64 = (0..3).map(|c| v.component(c).coeffs()[idx].norm_sqr()).sum();
            if e == 0.0 {
                continue;
            }
            l2 += e;
            hn += kh.powf(-2.0 * s) * e;
            mixed += kh.powf(-2.0 * s) * kv.powf(-s - 0.5) * e;
            v3 += v.component(2).coeffs()[idx].norm_sqr();
        }
        let vol = g.volume();
        let a_s = vol * (l2 + hn);
        let b_s = vol * (v3 + mixed) + a_s.powf(1.5);
        assert!(((r.a_s - a_s) / a_s).abs() <= 1e-12);
        assert!(((r.b_s - b_s) / b_s).abs() <= 1e-12);
    }
}
