// Decay of ‖v³_L(t)‖² on ℝ³ by adaptive quadrature, with power-law fits.

use anidecay::decay::log_times;
use anidecay::duhamel::{linear_decay_quadrature, QuadratureProfile};

pub fn run_example() -> anidecay::Result<()> {
    let times = log_times(10.0, 1000.0, 21);
    for a in [0.5, 1.0, 1.5] {
        let d = linear_decay_quadrature(&QuadratureProfile::Gaussian { a }, 0.5, &times)?;
        let fit = d.fit.expect("enough samples");
        println!("gaussian a = {a}: exponent {:+.4} (closed form {:+.4})", fit.exponent, -(a + 1.0));
    }
    for s in [0.5, 0.6, 0.8] {
        let profile = QuadratureProfile::near_critical(s, 0.02);
        let d = linear_decay_quadrature(&profile, s, &times)?;
        let fit = d.fit.expect("enough samples");
        println!("div-free s = {s}: exponent {:+.4}, bound {:+.4}", fit.exponent, d.target);
    }
    let outside = QuadratureProfile::near_critical(0.5, -0.1);
    if let Err(e) = linear_decay_quadrature(&outside, 0.5, &times) {
        println!("rejected: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anidecay::Result<()> {
    run_example()
}
