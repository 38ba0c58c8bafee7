// Anisotropic Sobolev, Besov and mixed Lebesgue norms of one field, and a full
// monitoring row.

use anidecay::littlewood_paley::{BlockDirection, DyadicFilterBank};
use anidecay::norms::{aniso_sobolev_norm, b0half_norm, mixed_lebesgue_norm, NormContext};
use anidecay::spectral::Grid3;
use anidecay::testing::random_div_free;

pub fn run_example() -> anidecay::Result<()> {
    let grid = Grid3::new(16, 16, 8.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI)?;
    let v = random_div_free(&grid, 5);
    let v1 = v.component(0);

    for (sh, sv) in [(0.0, 0.0), (-0.5, 0.0), (0.0, 0.5), (-0.5, -0.5)] {
        let n = aniso_sobolev_norm(v1, sh, sv)?;
        println!("‖v1‖_H^({sh},{sv}) = {:.6e}  (excluded mass {:.1e})", n.value, n.excluded_l2_sq);
    }
    let bank = DyadicFilterBank::for_grid(grid, BlockDirection::Vertical)?;
    println!("‖v1‖_B^(0,1/2) = {:.6e}", b0half_norm(v1, &bank)?);
    println!("‖v1‖_L^4_h(L^2_v) = {:.6e}", mixed_lebesgue_norm(v1, 4.0, 2.0)?);

    let ctx = NormContext::new(grid, 0.5, 4.0)?;
    let row = ctx.evaluate(&v, 0.0)?;
    for (name, value) in anidecay::norms::NormReport::COLUMNS.iter().zip(row.values()) {
        println!("  {name:<18} {value:.6e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
