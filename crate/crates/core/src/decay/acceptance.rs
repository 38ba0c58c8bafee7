use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::NormReport;
use crate::solver::TrajectoryRecord;

use super::fit::{fit_power_law, DecayFit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Slack on each one-sided exponent target.
    pub exponent: f64,
    /// Slack on the `v³` versus `v^h` gap.
    pub gap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exponent: 0.15,
            gap: 0.25,
        }
    }
}

/// One fitted series against its target exponent. Passing means decaying at least as
/// fast as the target, up to the tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetCheck {
    pub quantity: String,
    /// The bound the target comes from, as displayed.
    pub bound: String,
    pub target: f64,
    pub fit: DecayFit,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub v3_exponent: f64,
    pub vh_exponent: f64,
    /// `v3_exponent - vh_exponent`
    pub gap: f64,
    /// `-(s/2 + 1/4)`
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub s: f64,
    pub window: (f64, f64),
    pub tolerances: Tolerances,
    pub targets: Vec<TargetCheck>,
    pub ordering: OrderingCheck,
}

impl AcceptanceReport {
    pub fn targets_pass(&self) -> bool {
        self.targets.iter().all(|t| t.pass)
    }

    pub fn pass(&self) -> bool {
        self.targets_pass() && self.ordering.pass
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

impl fmt::Display for AcceptanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "decay acceptance, s = {}, window [{}, {}], tolerance {}",
            self.s, self.window.0, self.window.1, self.tolerances.exponent
        )?;
        for t in &self.targets {
            writeln!(
                f,
                "  {:<4} {:<26} fitted {:+.4} ± {:.4}  target {:+.4}  R² {:.5}  ({})",
                if t.pass { "PASS" } else { "FAIL" },
                t.quantity,
                t.fit.exponent,
                t.fit.stderr,
                t.target,
                t.fit.r_squared,
                t.bound
            )?;
        }
        let o = &self.ordering;
        writeln!(
            f,
            "  {:<4} {:<26} gap {:+.4} (v³ {:+.4}, v^h {:+.4})  target {:+.4} + {}",
            if o.pass { "PASS" } else { "FAIL" },
            "ordering v³ vs v^h",
            o.gap,
            o.v3_exponent,
            o.vh_exponent,
            o.target,
            o.tolerance
        )
    }
}

/// The fitted quantities: name, row extractor, time weight power, target, bound.
fn quantities(s: f64) -> Vec<(&'static str, fn(&NormReport) -> f64, i32, f64, &'static str)> {
    let v3 = -(1.5 * s + 0.25);
    vec![
        ("l2_sq", |r| r.l2_sq, 0, -s, "‖v‖² ≤ C A_s ⟨t⟩^{-s}"),
        ("t*grad_h_l2_sq", |r| r.grad_h_l2_sq, 1, -s, "t‖∇_h v‖² ≤ C A_s ⟨t⟩^{-s}"),
        ("d3v_l2_sq", |r| r.d3v_l2_sq, 0, -0.5, "‖∂3 v‖² ≤ C ⟨t⟩^{-1/2}"),
        ("v3_l2_sq", |r| r.v3_l2_sq, 0, v3, "‖v³‖² ≤ C ⟨t⟩^{-3s/2} t^{-1/4}"),
        ("t*grad_h_v3_l2_sq", |r| r.grad_h_v3_l2_sq, 1, v3, "t‖∇_h v³‖² ≤ C ⟨t⟩^{-3s/2} t^{-1/4}"),
        ("v3_l2_sq (alt)", |r| r.v3_l2_sq, 0, -1.5 * s, "‖v³‖² ≤ C ⟨t⟩^{-3s/2}"),
        ("grad_h_v3_l2_sq (alt)", |r| r.grad_h_v3_l2_sq, 0, -1.5 * s - 1.0, "‖∇_h v³‖² ≤ C ⟨t⟩^{-3s/2-1}"),
    ]
}

fn excluded_fraction(rows: &[NormReport], window: (f64, f64)) -> f64 {
    let inside: Vec<f64> = rows
        .iter()
        .filter(|r| r.t >= window.0 && r.t <= window.1 && r.l2_sq > 0.0)
        .map(|r| r.khzero_energy / r.l2_sq)
        .collect();
    if inside.is_empty() {
        0.0
    } else {
        inside.iter().sum::<f64>() / inside.len() as f64
    }
}

/// Fits every target series on `window` and the `v³`/`v^h` ordering.
///
/// `l_h` enforces the infrared bound `t1 <= (l_h / 2π)² / 4`.
pub fn acceptance_from_rows(
    rows: &[NormReport],
    s: f64,
    l_h: f64,
    window: (f64, f64),
    tol: Tolerances,
) -> Result<AcceptanceReport> {
    let bound = (l_h / (2.0 * std::f64::consts::PI)).powi(2) / 4.0;
    if window.1 > bound {
        return Err(Error::Fit(format!(
            "window end {} exceeds the infrared bound {bound} of this box",
            window.1
        )));
    }
    if rows.is_empty() {
        return Err(Error::MissingSeries("norm rows".into()));
    }
    let t: Vec<f64> = rows.iter().map(|r| r.t).collect();
    let excluded = excluded_fraction(rows, window);
    let fit = |name: &str, f: fn(&NormReport) -> f64, weight: i32| -> Result<DecayFit> {
        let y: Vec<f64> = rows.iter().map(|r| f(r) * r.t.powi(weight)).collect();
        let mut fit = fit_power_law(name, &t, &y, window)?;
        fit.excluded_fraction = Some(excluded);
        Ok(fit)
    };
    let mut targets = Vec::new();
    for (name, f, weight, target, bound) in quantities(s) {
        let fit = fit(name, f, weight)?;
        targets.push(TargetCheck {
            quantity: name.to_string(),
            bound: bound.to_string(),
            target,
            pass: fit.exponent <= target + tol.exponent,
            fit,
        });
    }
    let v3 = fit("v3_l2_sq", |r| r.v3_l2_sq, 0)?;
    let vh = fit("vh_l2_sq", |r| r.vh_l2_sq, 0)?;
    let gap = v3.exponent - vh.exponent;
    let target = -(0.5 * s + 0.25);
    Ok(AcceptanceReport {
        s,
        window,
        tolerances: tol,
        targets,
        ordering: OrderingCheck {
            v3_exponent: v3.exponent,
            vh_exponent: vh.exponent,
            gap,
            target,
            tolerance: tol.gap,
            pass: gap <= target + tol.gap,
        },
    })
}

/// [`acceptance_from_rows`] on a run, with the window from its configuration.
pub fn acceptance(record: &TrajectoryRecord, tol: Tolerances) -> Result<AcceptanceReport> {
    let c = &record.config;
    acceptance_from_rows(&record.rows, c.s, c.l_h, (c.fit_t0, c.fit_t1), tol)
}
