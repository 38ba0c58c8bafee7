use std::f64::consts::PI;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::duhamel::identity_defects;
use crate::error::Result;
use crate::littlewood_paley::{
    bernstein_check, bony_decompose, physical_product, BlockDirection, BlockKind, DyadicFilterBank, Profile,
};
use crate::solver::{energy_budget, run, RunConfig};
use crate::spectral::{leray_project, Dealias, Grid3};
use crate::testing::{random_div_free, random_real_field, random_vector_field};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance`.
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<4} {:<36} {:+.3e} <= {:.0e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.tolerance
            )?;
        }
        writeln!(f, "{} checks in {:.2} s", self.checks.len(), self.seconds)
    }
}

fn banks(grid: Grid3, profile: Profile) -> Result<[DyadicFilterBank; 2]> {
    Ok([
        DyadicFilterBank::for_grid(grid, BlockDirection::Horizontal)?.with_profile(profile),
        DyadicFilterBank::for_grid(grid, BlockDirection::Vertical)?.with_profile(profile),
    ])
}

/// The identity suite on a 16³ grid, with the given bank profile.
/// [`Profile::Corrupted`] is the negative control.
pub fn identity_suite(profile: Profile) -> Result<CheckReport> {
    let start = Instant::now();
    let grid = Grid3::new(16, 16, 8.0 * PI, 2.0 * PI)?;
    let mut checks = Vec::new();

    let (x, a) = random_real_field(&grid, 11);
    let physical: f64 = x.iter().map(|v| v * v).sum::<f64>() * grid.cell_volume();
    checks.push(Check::new("plancherel", (physical - a.l2_sq()).abs() / physical, 1e-12));

    let p = leray_project(&random_vector_field(&grid, 12));
    let pp = leray_project(&p);
    checks.push(Check::new("leray idempotence", pp.sub(&p)?.l2_sq().sqrt() / p.l2_sq().sqrt(), 1e-12));
    checks.push(Check::new("leray divergence", p.divergence_defect(), 1e-12));

    let [bh, bv] = banks(grid, profile)?;
    let (_, b) = random_real_field(&grid, 13);
    for (tag, bank) in [("horizontal", &bh), ("vertical", &bv)] {
        checks.push(Check::new(format!("partition {tag}"), bank.partition_residual(), 1e-12));
        checks.push(Check::new(
            format!("reconstruction {tag}"),
            bank.reconstruction_residual(&a)?,
            1e-12,
        ));
        let split = bony_decompose(bank, &a, &b)?;
        let prod = physical_product(&a, &b)?;
        checks.push(Check::new(
            format!("paraproduct {tag}"),
            split.sum().sub(&prod)?.l2() / prod.l2(),
            1e-10,
        ));
        // max(lower / ratio, ratio / upper) over bands and orders: inside iff <= 1.
        let mut worst: f64 = 0.0;
        let alphas: &[&[u32]] = match bank.direction() {
            BlockDirection::Horizontal => &[&[1, 0], &[1, 1], &[0, 3]],
            BlockDirection::Vertical => &[&[1], &[2]],
        };
        for j in bank.j_min()..=bank.j_max() {
            let block = bank.dyadic_block(&a, BlockKind::Delta, j)?;
            if block.max_abs() == 0.0 {
                continue;
            }
            for alpha in alphas {
                let r = bernstein_check(bank, &block, j, alpha)?;
                let score = (r.lower / r.ratio).max(r.ratio / r.upper);
                worst = worst.max(if r.within { score.min(1.0) } else { score.max(1.0 + f64::EPSILON) });
            }
        }
        checks.push(Check::new(format!("bernstein {tag}"), worst, 1.0));
    }

    let mut kernel: f64 = 0.0;
    for (seed, rule) in [(14, Dealias::TwoThirds), (15, Dealias::None)] {
        let d = identity_defects(&random_div_free(&grid, seed), rule);
        kernel = kernel.max(d.pressure).max(d.kernels);
    }
    checks.push(Check::new("kernel identity", kernel, 1e-10));

    let config = RunConfig {
        n_h: 16,
        n_v: 16,
        l_h: 8.0 * PI,
        l_v: 2.0 * PI,
        dt: 0.01,
        t_end: 0.5,
        output_every: 0.1,
        c0: 0.5,
        fit_t0: 0.1,
        fit_t1: 0.5,
        ..Default::default()
    };
    let record = run(&config)?;
    let budget = energy_budget(&record);
    checks.push(Check::new("energy identity excess", budget.max_excess(), 1e-6));
    checks.push(Check::new("run divergence", record.max_divergence(), 1e-12));

    Ok(CheckReport {
        checks,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn verify_identities() -> Result<CheckReport> {
    identity_suite(Profile::Standard)
}
