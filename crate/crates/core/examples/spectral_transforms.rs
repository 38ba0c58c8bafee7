// Transforms, derivatives, Leray projection and the dealiased nonlinear term.

use anidecay::spectral::{
    derivative, forward_transform, inverse_transform, leray_project, nonlinear_term, Dealias, Grid3,
};
use anidecay::testing::{random_real_field, random_vector_field};

pub fn run_example() -> anidecay::Result<()> {
    let grid = Grid3::new(16, 8, 4.0 * std::f64::consts::PI, 2.0 * std::f64::consts::PI)?;
    let (x, a) = random_real_field(&grid, 1);

    let physical: f64 = x.iter().map(|v| v * v).sum::<f64>() * grid.cell_volume();
    println!("plancherel: {physical:.15e} vs {:.15e}", a.l2_sq());

    let back = inverse_transform(&forward_transform(&x, &grid)?);
    let err = x.iter().zip(&back).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    println!("round trip max error {err:.2e}");

    let d1 = derivative(&a, 0);
    println!("‖∂1 a‖² = {:.6e}", d1.l2_sq());

    let v = leray_project(&random_vector_field(&grid, 2));
    println!("divergence after projection {:.2e}", v.divergence_defect());

    let n = nonlinear_term(&v, Dealias::TwoThirds);
    println!("<N(v), v> = {:.2e} (energy neutral)", n.inner(&v).re);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
