// A short nonlinear run with its energy budget and a priori monitor.

use std::f64::consts::PI;

use anidecay::solver::{apriori_monitor, energy_budget, run, RunConfig, ViscosityMode};

pub fn run_example() -> anidecay::Result<()> {
    let config = RunConfig {
        n_h: 16,
        n_v: 16,
        l_h: 8.0 * PI,
        dt: 0.01,
        t_end: 2.0,
        c0: 0.5,
        fit_t0: 0.5,
        fit_t1: 2.0,
        ..Default::default()
    };
    for mode in [ViscosityMode::Anisotropic, ViscosityMode::Isotropic, ViscosityMode::LinearOnly] {
        let record = run(&RunConfig { mode, ..config.clone() })?;
        let budget = energy_budget(&record);
        let last = record.rows.last().expect("rows");
        println!(
            "{:<12} E(2) = {:.6e}  ‖v³‖² = {:.4e}  residual {:.2e}  excess {:.1e}  div {:.1e}",
            mode.name(),
            last.l2_sq,
            last.v3_l2_sq,
            budget.max_residual(),
            budget.max_excess(),
            record.max_divergence()
        );
    }

    let record = run(&config)?;
    println!("cfl: dt = {} limit {:.3}", record.cfl.dt, record.cfl.limit);
    for m in apriori_monitor(&record).iter().step_by(5) {
        println!(
            "t = {:.1}  grad_h: {:+.3e} vs {:.3e}  d3: {:+.3e} vs {:.3e}",
            m.t, m.grad_h_lhs, m.grad_h_rhs, m.d3_lhs, m.d3_rhs
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
