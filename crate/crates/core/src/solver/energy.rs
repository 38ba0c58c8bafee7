use serde::{Deserialize, Serialize};

use super::TrajectoryRecord;

/// `E = ‖v‖²` and the dissipation rate `D` at every step time. `D` is `‖∇_h v‖²`
/// (`‖∇v‖²` in isotropic mode), so `dE/dt = -2D`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub t: Vec<f64>,
    pub energy: Vec<f64>,
    pub dissipation: Vec<f64>,
}

impl EnergyLedger {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            t: Vec::with_capacity(n),
            energy: Vec::with_capacity(n),
            dissipation: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, t: f64, energy: f64, dissipation: f64) {
        self.t.push(t);
        self.energy.push(energy);
        self.dissipation.push(dissipation);
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBudget {
    pub t: Vec<f64>,
    /// `|E(t) + 2∫₀ᵗ D - E(0)| / E(0)` with the trapezoid rule.
    pub residual: Vec<f64>,
    /// `2 Σ h³/12 |D''| / E(0)` over the panels: the trapezoid error estimate.
    pub quadrature: Vec<f64>,
}

impl EnergyBudget {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().copied().fold(0.0, f64::max)
    }

    /// `max(r - q)`, the residual not explained by quadrature error.
    pub fn max_excess(&self) -> f64 {
        self.residual
            .iter()
            .zip(&self.quadrature)
            .map(|(r, q)| r - q)
            .fold(0.0, f64::max)
    }
}

pub fn energy_budget(record: &TrajectoryRecord) -> EnergyBudget {
    ledger_budget(&record.ledger)
}

pub(crate) fn ledger_budget(l: &EnergyLedger) -> EnergyBudget {
    let n = l.len();
    let mut out = EnergyBudget {
        t: l.t.clone(),
        residual: vec![0.0; n],
        quadrature: vec![0.0; n],
    };
    if n == 0 || l.energy[0] == 0.0 {
        return out;
    }
    let e0 = l.energy[0];
    let (t, d) = (&l.t, &l.dissipation);
    // Three-point second derivative at node j, one-sided at the ends.
    let second = |j: usize| {
        if n < 3 {
            return 0.0;
        }
        let a = j.saturating_sub(1).min(n - 3);
        let (b, c) = (a + 1, a + 2);
        2.0 * ((d[c] - d[b]) / (t[c] - t[b]) - (d[b] - d[a]) / (t[b] - t[a])) / (t[c] - t[a])
    };
    let (mut integral, mut err) = (0.0, 0.0);
    for i in 0..n {
        if i > 0 {
            let h = t[i] - t[i - 1];
            integral += 0.5 * h * (d[i] + d[i - 1]);
            let curvature = 0.5 * (second(i - 1).abs() + second(i).abs());
            err += h * h * h / 12.0 * curvature;
        }
        out.residual[i] = (l.energy[i] + 2.0 * integral - e0).abs() / e0;
        out.quadrature[i] = 2.0 * err / e0;
    }
    out
}
