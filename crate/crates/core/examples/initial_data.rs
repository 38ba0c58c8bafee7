// Envelope data, smallness rescaling, data functionals and the parameter gate.

use anidecay::initial_data::{generate, rescale_to_smallness, SpectralEnvelope};
use anidecay::norms::{data_functionals, gate_lower_bound, parameter_gate};
use anidecay::spectral::Grid3;

pub fn run_example() -> anidecay::Result<()> {
    let (s, s1) = (0.5, 4.0);
    println!("gate for s1 = {s1}: s in ({:.6}, 1)", gate_lower_bound(s1));
    for probe in [13.0 / 30.0, 13.0 / 30.0 + 1e-6, 1.0] {
        println!("  s = {probe:.8}: {}", if parameter_gate(probe, s1).is_ok() { "accepted" } else { "rejected" });
    }

    let grid = Grid3::new(32, 16, 16.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI)?;
    let env = SpectralEnvelope { seed: 7, ..Default::default() };
    let (v0, report) = generate(&env, &grid, s, s1)?;
    println!("raw data: ‖v0‖² = {:.4e}, c0 norm = {:.4e}", report.l2_sq, report.c0_norm);

    let small = rescale_to_smallness(&v0, 0.05)?;
    let r = data_functionals(&small, s, s1)?;
    println!("rescaled: c0 norm = {:.4e}", r.c0_norm);
    println!("  ‖v0‖²_(-s,0) = {:.4e}  A_s = {:.4e}  B_s = {:.4e}", r.hneg_s_sq, r.a_s, r.b_s);
    println!("  mass on excluded planes {:.1e}, divergence {:.1e}", r.excluded_l2_sq, r.divergence_defect);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
