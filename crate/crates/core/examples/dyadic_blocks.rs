// Horizontal and vertical Littlewood-Paley blocks, Bony's decomposition and Bernstein
// ratios.

use anidecay::littlewood_paley::{
    bernstein_check, bony_decompose, physical_product, BlockDirection, BlockKind, DyadicFilterBank,
};
use anidecay::spectral::Grid3;
use anidecay::testing::random_real_field;

pub fn run_example() -> anidecay::Result<()> {
    let grid = Grid3::new(32, 16, 8.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI)?;
    let (_, f) = random_real_field(&grid, 3);
    let (_, g) = random_real_field(&grid, 4);

    for dir in [BlockDirection::Horizontal, BlockDirection::Vertical] {
        let bank = DyadicFilterBank::for_grid(grid, dir)?;
        println!(
            "{dir:?}: blocks {}..={}, partition residual {:.1e}, reconstruction {:.1e}",
            bank.j_min(),
            bank.j_max(),
            bank.partition_residual(),
            bank.reconstruction_residual(&f)?
        );
        for (j, e) in bank.block_energies(&f)? {
            println!("  j = {j:>2}  ‖Δ_j f‖² = {e:.4e}");
        }

        let split = bony_decompose(&bank, &f, &g)?;
        let prod = physical_product(&f, &g)?;
        println!("  paraproduct residual {:.1e}", split.sum().sub(&prod)?.l2() / prod.l2());

        let j = bank.j_max() - 1;
        let block = bank.dyadic_block(&f, BlockKind::Delta, j)?;
        let alpha: &[u32] = match dir {
            BlockDirection::Horizontal => &[1, 0],
            BlockDirection::Vertical => &[1],
        };
        let r = bernstein_check(&bank, &block, j, alpha)?;
        println!("  bernstein j = {j}: {:.3} in [{:.3}, {:.3}]", r.ratio, r.lower, r.upper);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
