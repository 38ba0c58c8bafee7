use serde::{Deserialize, Serialize};

use super::functionals::parameter_gate;
use super::sobolev::b0half_from_planes;
use crate::error::{Error, Result};
use crate::littlewood_paley::{BlockDirection, DyadicFilterBank};
use crate::spectral::{Grid3, SpectralVectorField};

macro_rules! norm_report {
    ($($(#[$doc:meta])* $name:ident),* $(,)?) => {
        /// One monitoring row. Every `*_sq` column is a squared norm; `b0half`,
        /// `grad_h_b0half`, `linf` and `div_max` are not squared.
        #[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
        pub struct NormReport {
            pub t: f64,
            $($(#[$doc])* pub $name: f64,)*
        }

        impl NormReport {
            /// CSV header, `t` first.
            pub const COLUMNS: &'static [&'static str] = &["t", $(stringify!($name)),*];

            pub fn values(&self) -> Vec<f64> {
                vec![self.t, $(self.$name),*]
            }

            pub fn get(&self, column: &str) -> Option<f64> {
                match column {
                    "t" => Some(self.t),
                    $(stringify!($name) => Some(self.$name),)*
                    _ => None,
                }
            }

            pub fn from_values(values: &[f64]) -> Result<Self> {
                if values.len() != Self::COLUMNS.len() {
                    return Err(Error::DimensionMismatch {
                        expected: Self::COLUMNS.len(),
                        actual: values.len(),
                    });
                }
                let mut it = values.iter().copied();
                Ok(Self {
                    t: it.next().unwrap_or_default(),
                    $($name: it.next().unwrap_or_default(),)*
                })
            }
        }
    };
}

norm_report! {
    /// `‖v‖²`
    l2_sq,
    /// `‖v^h‖²`
    vh_l2_sq,
    /// `‖v³‖²`
    v3_l2_sq,
    /// `‖∇_h v‖²`
    grad_h_l2_sq,
    /// `‖∇v‖²`
    grad_l2_sq,
    /// `‖∇_h v³‖²`
    grad_h_v3_l2_sq,
    /// `‖Δ_h v‖²`
    lap_h_l2_sq,
    /// `‖∂3 v‖²`
    d3v_l2_sq,
    /// `‖∂3² v‖²`
    d3d3v_l2_sq,
    /// `‖∂3 v‖²_{Ḣ^{-1/2,0}}`
    d3v_hneg_half_sq,
    /// `‖∂3 v‖²_{Ḣ^{1/2,0}}`
    d3v_hpos_half_sq,
    /// `‖v‖²_{Ḣ^{-s,0}}`, plane `k_h = 0` excluded
    hneg_s_sq,
    /// `‖∇_h v‖²_{Ḣ^{-s,0}}`
    grad_h_hneg_s_sq,
    /// `‖v‖²_{Ḣ^{0,s1}}`
    h0s1_sq,
    /// `‖∇_h v‖²_{Ḣ^{0,s1}}`
    grad_h_h0s1_sq,
    /// `‖v‖_{B^{0,1/2}}`
    b0half,
    /// `‖∇_h v‖_{B^{0,1/2}}`
    grad_h_b0half,
    /// `‖div_h v^h‖²`
    div_h_vh_l2_sq,
    /// `‖v‖²` restricted to the undamped plane `k_h = 0`
    khzero_energy,
    /// grid maximum of `|v|`
    linf,
    /// `max |k . v̂|`
    div_max,
}

/// Per-grid weight tables for [`NormReport`] rows.
#[derive(Debug, Clone)]
pub struct NormContext {
    grid: Grid3,
    s: f64,
    s1: f64,
    bank: DyadicFilterBank,
    kh2: Vec<f64>,
    kh_neg_s: Vec<f64>,
    kh_neg_one: Vec<f64>,
    kh_one: Vec<f64>,
    d_h: Vec<[f64; 2]>,
    k3sq: Vec<f64>,
    /// `∂3` symbol squared (Nyquist zeroed, as in [`crate::spectral::derivative`]).
    d3sq: Vec<f64>,
    k3_s1: Vec<f64>,
}

impl NormContext {
    /// Requires the parameter gate on `(s, s1)`.
    pub fn new(grid: Grid3, s: f64, s1: f64) -> Result<Self> {
        parameter_gate(s, s1)?;
        let bank = DyadicFilterBank::for_grid(grid, BlockDirection::Vertical)?;
        let w = grid.wavenumbers();
        let n = grid.n_h;
        let mut kh2 = Vec::with_capacity(n * n);
        let mut d_h = Vec::with_capacity(n * n);
        for i2 in 0..n {
            for i1 in 0..n {
                kh2.push(w.kh_sq(i1, i2));
                d_h.push([w.d1[i1], w.d2[i2]]);
            }
        }
        let inv_pow = |k2: &f64, p: f64| if *k2 == 0.0 { 0.0 } else { k2.powf(p) };
        Ok(Self {
            grid,
            s,
            s1,
            bank,
            kh_neg_s: kh2.iter().map(|k| inv_pow(k, -s)).collect(),
            kh_neg_one: kh2.iter().map(|k| inv_pow(k, -0.5)).collect(),
            kh_one: kh2.iter().map(|k| k.sqrt()).collect(),
            kh2,
            d_h,
            k3sq: w.k3.iter().map(|k| k * k).collect(),
            d3sq: w.d3.iter().map(|k| k * k).collect(),
            k3_s1: w.k3.iter().map(|k| inv_pow(&(k * k), s1)).collect(),
        })
    }

    pub fn grid(&self) -> &Grid3 {
        &self.grid
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn vertical_bank(&self) -> &DyadicFilterBank {
        &self.bank
    }

    pub fn evaluate(&self, v: &SpectralVectorField, t: f64) -> Result<NormReport> {
        let g = self.grid;
        if *v.grid() != g {
            return Err(Error::GridMismatch);
        }
        let plane = g.n_h * g.n_h;
        let [c1, c2, c3] = v.components();
        let (c1, c2, c3) = (c1.coeffs(), c2.coeffs(), c3.coeffs());
        let mut r = NormReport {
            t,
            ..Default::default()
        };
        let mut e_planes = vec![0.0; g.n_v];
        let mut g_planes = vec![0.0; g.n_v];
        for i3 in 0..g.n_v {
            let (k3sq, d3sq, k3s1) = (self.k3sq[i3], self.d3sq[i3], self.k3_s1[i3]);
            let (mut ep, mut gp) = (0.0, 0.0);
            for h in 0..plane {
                let idx = h + plane * i3;
                let eh = c1[idx].norm_sqr() + c2[idx].norm_sqr();
                let e3 = c3[idx].norm_sqr();
                let e = eh + e3;
                if e == 0.0 {
                    continue;
                }
                let kh2 = self.kh2[h];
                r.l2_sq += e;
                r.vh_l2_sq += eh;
                r.v3_l2_sq += e3;
                r.grad_h_l2_sq += kh2 * e;
                r.grad_l2_sq += (kh2 + k3sq) * e;
                r.grad_h_v3_l2_sq += kh2 * e3;
                r.lap_h_l2_sq += kh2 * kh2 * e;
                r.d3v_l2_sq += d3sq * e;
                r.d3d3v_l2_sq += d3sq * d3sq * e;
                r.d3v_hneg_half_sq += d3sq * self.kh_neg_one[h] * e;
                r.d3v_hpos_half_sq += d3sq * self.kh_one[h] * e;
                r.hneg_s_sq += self.kh_neg_s[h] * e;
                r.grad_h_hneg_s_sq += kh2 * self.kh_neg_s[h] * e;
                r.h0s1_sq += k3s1 * e;
                r.grad_h_h0s1_sq += kh2 * k3s1 * e;
                let [d1, d2] = self.d_h[h];
                r.div_h_vh_l2_sq += (c1[idx] * d1 + c2[idx] * d2).norm_sqr();
                if kh2 == 0.0 {
                    r.khzero_energy += e;
                }
                ep += e;
                gp += kh2 * e;
            }
            e_planes[i3] = ep;
            g_planes[i3] = gp;
        }
        let vol = g.volume();
        for x in [
            &mut r.l2_sq,
            &mut r.vh_l2_sq,
            &mut r.v3_l2_sq,
            &mut r.grad_h_l2_sq,
            &mut r.grad_l2_sq,
            &mut r.grad_h_v3_l2_sq,
            &mut r.lap_h_l2_sq,
            &mut r.d3v_l2_sq,
            &mut r.d3d3v_l2_sq,
            &mut r.d3v_hneg_half_sq,
            &mut r.d3v_hpos_half_sq,
            &mut r.hneg_s_sq,
            &mut r.grad_h_hneg_s_sq,
            &mut r.h0s1_sq,
            &mut r.grad_h_h0s1_sq,
            &mut r.div_h_vh_l2_sq,
            &mut r.khzero_energy,
        ] {
            *x *= vol;
        }
        r.b0half = b0half_from_planes(&self.bank, &g, &e_planes);
        r.grad_h_b0half = b0half_from_planes(&self.bank, &g, &g_planes);
        r.linf = v.linf();
        r.div_max = v.divergence_max();
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{aniso_sobolev_norm, b0half_norm};
    use crate::spectral::derivative;
    use crate::testing::random_div_free;

    #[test]
    fn columns_round_trip() {
        let r = NormReport {
            t: 1.5,
            linf: 2.0,
            ..Default::default()
        };
        assert_eq!(NormReport::from_values(&r.values()).unwrap(), r);
        assert_eq!(NormReport::COLUMNS.len(), r.values().len());
        assert_eq!(r.get("linf"), Some(2.0));
        assert_eq!(NormReport::COLUMNS[0], "t");
    }

    #[test]
    fn row_matches_the_general_norms() {
        let g = Grid3::new(16, 16, 11.0, 4.0).unwrap();
        let ctx = NormContext::new(g, 0.6, 4.0).unwrap();
        let v = random_div_free(&g, 12);
        let r = ctx.evaluate(&v, 0.0).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1e-300);
        let d3 = SpectralVectorField::new(std::array::from_fn(|i| derivative(v.component(i), 2))).unwrap();
        assert!(close(r.l2_sq, v.l2_sq()));
        assert!(close(r.grad_h_l2_sq, aniso_sobolev_norm(&v, 1.0, 0.0).unwrap().squared));
        assert!(close(r.hneg_s_sq, aniso_sobolev_norm(&v, -0.6, 0.0).unwrap().squared));
        assert!(close(r.h0s1_sq, aniso_sobolev_norm(&v, 0.0, 4.0).unwrap().squared));
        assert!(close(r.d3v_hneg_half_sq, aniso_sobolev_norm(&d3, -0.5, 0.0).unwrap().squared));
        assert!(close(r.b0half, b0half_norm(&v, ctx.vertical_bank()).unwrap()));
        assert!(close(r.khzero_energy, aniso_sobolev_norm(&v, -0.6, 0.0).unwrap().excluded_l2_sq));
        assert!(close(r.v3_l2_sq + r.vh_l2_sq, r.l2_sq));
    }
}
