use serde::{Deserialize, Serialize};

use crate::norms::NormReport;

use super::TrajectoryRecord;

/// Both sides of the three differential inequalities of the a priori estimates, with
/// the unknown constant set to 1. Time derivatives are finite differences of the norm
/// rows. Nothing here is asserted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MonitorRow {
    pub t: f64,
    /// `d/dt ‖∇_h v‖²`
    pub ddt_grad_h_l2_sq: f64,
    /// `‖Δ_h v‖²`
    pub lap_h_l2_sq: f64,
    /// `d/dt ‖∇_h v‖² + ‖Δ_h v‖²`
    pub grad_h_lhs: f64,
    /// `(‖∇_h v‖²_{B^{0,1/2}} + ‖∂3 v‖²_{Ḣ^{1/2,0}}) ‖∇_h v‖²`
    pub grad_h_rhs: f64,
    /// `d/dt ‖∂3 v‖²_{Ḣ^{-1/2,0}}`
    pub ddt_d3v_hneg_half_sq: f64,
    /// `‖∂3 v‖²_{Ḣ^{1/2,0}}`
    pub d3v_hpos_half_sq: f64,
    pub d3_lhs: f64,
    /// `‖∇_h v‖²_{B^{0,1/2}} ‖∂3 v‖²_{Ḣ^{-1/2,0}}
    ///  + ‖∇_h v³‖^{1/2} ‖div_h v^h‖^{1/2} ‖∂3² v‖ ‖∂3 v‖_{Ḣ^{-1/2,0}}`
    pub d3_rhs: f64,
    /// `d/dt ‖v‖²_{Ḣ^{-s,0}}`
    pub ddt_hneg_s_sq: f64,
    /// `‖∇_h v‖²_{Ḣ^{-s,0}}`
    pub grad_h_hneg_s_sq: f64,
    pub hneg_s_lhs: f64,
    /// `((1 + ‖v‖²_{B^{0,1/2}}) ‖∇_h v‖²_{B^{0,1/2}} + ‖∂3 v‖²_{Ḣ^{1/2,0}}) ‖v‖²_{Ḣ^{-s,0}}`
    pub hneg_s_rhs: f64,
}

impl MonitorRow {
    pub const COLUMNS: [&'static str; 13] = [
        "t",
        "ddt_grad_h_l2_sq",
        "lap_h_l2_sq",
        "grad_h_lhs",
        "grad_h_rhs",
        "ddt_d3v_hneg_half_sq",
        "d3v_hpos_half_sq",
        "d3_lhs",
        "d3_rhs",
        "ddt_hneg_s_sq",
        "grad_h_hneg_s_sq",
        "hneg_s_lhs",
        "hneg_s_rhs",
    ];

    pub fn values(&self) -> [f64; 13] {
        [
            self.t,
            self.ddt_grad_h_l2_sq,
            self.lap_h_l2_sq,
            self.grad_h_lhs,
            self.grad_h_rhs,
            self.ddt_d3v_hneg_half_sq,
            self.d3v_hpos_half_sq,
            self.d3_lhs,
            self.d3_rhs,
            self.ddt_hneg_s_sq,
            self.grad_h_hneg_s_sq,
            self.hneg_s_lhs,
            self.hneg_s_rhs,
        ]
    }
}

/// Second-order finite differences on a possibly non-uniform grid, one-sided at the ends.
pub(crate) fn derivative(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0.0],
        2 => {
            let d = (y[1] - y[0]) / (t[1] - t[0]);
            return vec![d, d];
        }
        _ => {}
    }
    // Derivative at t[c] of the parabola through three nodes.
    let three = |i: [usize; 3], c: usize| {
        let [a, b, e] = i;
        let (ta, tb, te, x) = (t[a], t[b], t[e], t[c]);
        y[a] * ((x - tb) + (x - te)) / ((ta - tb) * (ta - te))
            + y[b] * ((x - ta) + (x - te)) / ((tb - ta) * (tb - te))
            + y[e] * ((x - ta) + (x - tb)) / ((te - ta) * (te - tb))
    };
    (0..n)
        .map(|c| {
            if c == 0 {
                three([0, 1, 2], 0)
            } else if c == n - 1 {
                three([n - 3, n - 2, n - 1], c)
            } else {
                three([c - 1, c, c + 1], c)
            }
        })
        .collect()
}

pub fn apriori_monitor(record: &TrajectoryRecord) -> Vec<MonitorRow> {
    monitor_rows(&record.rows)
}

pub(crate) fn monitor_rows(rows: &[NormReport]) -> Vec<MonitorRow> {
    let t: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let col = |f: fn(&NormReport) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let d_grad = derivative(&t, &col(|r| r.grad_h_l2_sq));
    let d_d3 = derivative(&t, &col(|r| r.d3v_hneg_half_sq));
    let d_neg = derivative(&t, &col(|r| r.hneg_s_sq));
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let gb2 = r.grad_h_b0half * r.grad_h_b0half;
            MonitorRow {
                t: r.t,
                ddt_grad_h_l2_sq: d_grad[i],
                lap_h_l2_sq: r.lap_h_l2_sq,
                grad_h_lhs: d_grad[i] + r.lap_h_l2_sq,
                grad_h_rhs: (gb2 + r.d3v_hpos_half_sq) * r.grad_h_l2_sq,
                ddt_d3v_hneg_half_sq: d_d3[i],
                d3v_hpos_half_sq: r.d3v_hpos_half_sq,
                d3_lhs: d_d3[i] + r.d3v_hpos_half_sq,
                d3_rhs: gb2 * r.d3v_hneg_half_sq
                    + r.grad_h_v3_l2_sq.powf(0.25)
                        * r.div_h_vh_l2_sq.powf(0.25)
                        * r.d3d3v_l2_sq.sqrt()
                        * r.d3v_hneg_half_sq.sqrt(),
                ddt_hneg_s_sq: d_neg[i],
                grad_h_hneg_s_sq: r.grad_h_hneg_s_sq,
                hneg_s_lhs: d_neg[i] + r.grad_h_hneg_s_sq,
                hneg_s_rhs: ((1.0 + r.b0half * r.b0half) * gb2 + r.d3v_hpos_half_sq) * r.hneg_s_sq,
            }
        })
        .collect()
}
