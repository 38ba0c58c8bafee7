// Acceptance report, Fourier-splitting check and the anisotropic/isotropic comparison
// on a small box.

use std::f64::consts::PI;

use anidecay::decay::{acceptance, compare_modes, fourier_splitting_check, Tolerances};
use anidecay::solver::{run, RunConfig};

pub fn run_example() -> anidecay::Result<()> {
    let config = RunConfig {
        n_h: 16,
        n_v: 16,
        l_h: 8.0 * PI,
        dt: 0.01,
        t_end: 4.0,
        c0: 0.5,
        fit_t0: 0.5,
        fit_t1: 4.0,
        ..Default::default()
    };
    let record = run(&config)?;
    let report = acceptance(&record, Tolerances::default())?;
    print!("{report}");
    let split = fourier_splitting_check(&record, config.s)?;
    println!("fourier splitting holds: {} (max ratio {:.4})", split.holds, split.max_ratio);

    let cmp = compare_modes(&config)?;
    for m in [&cmp.anisotropic, &cmp.isotropic] {
        println!("{:<12} gap {:+.3}  E(t_end) {:.4e}", m.mode.name(), m.gap, m.final_energy);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
