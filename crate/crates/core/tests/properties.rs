use proptest::prelude::*;
use rustfft::num_complex::Complex64;

use anidecay::decay::fit_power_law;
use anidecay::initial_data::scaling_transform;
use anidecay::io::{read_checkpoint, write_checkpoint};
use anidecay::spectral::{leray_project, nonlinear_term, Dealias, Grid3};
use anidecay::testing::{band_limited_div_free, random_div_free, random_vector_field};

fn grid() -> Grid3 {
    Grid3::new(8, 8, 5.0, 3.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leray_is_an_idempotent_orthogonal_projection(seed in 0u64..10_000) {
        let g = grid();
        let v = random_vector_field(&g, seed);
        let p = leray_project(&v);
        prop_assert!(leray_project(&p).sub(&p).unwrap().max_abs() <= 1e-14 * p.max_abs());
        prop_assert!(p.divergence_defect() <= 1e-13);
        // <v - Pv, Pv> = 0
        let r = v.sub(&p).unwrap();
        prop_assert!(r.inner(&p).norm() <= 1e-12 * v.l2_sq());
    }

    #[test]
    fn dealiased_nonlinearity_conserves_energy(seed in 0u64..10_000, amp in 0.01f64..10.0) {
        let g = grid();
        let v = band_limited_div_free(&g, seed, amp);
        let n = nonlinear_term(&v, Dealias::TwoThirds);
        let scale = n.l2_sq().sqrt() * v.l2_sq().sqrt();
        prop_assert!(n.inner(&v).re.abs() <= 1e-12 * scale.max(1e-300));
        prop_assert!(n.hermitian_defect() <= 1e-12 * n.max_abs().max(1e-300));
    }

    #[test]
    fn scaling_divides_energy_by_lambda(seed in 0u64..10_000) {
        let g = Grid3::new(16, 8, 8.0, 4.0).unwrap();
        let v = random_div_free(&g, seed);
        let w = scaling_transform(&v, 4.0).unwrap();
        prop_assert!((w.l2_sq() / v.l2_sq() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn checkpoints_round_trip(seed in 0u64..10_000, t in 0.0f64..1e3) {
        let v = random_div_free(&grid(), seed);
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &v, t).unwrap();
        let (w, t2) = read_checkpoint(buf.as_slice()).unwrap();
        prop_assert_eq!(t2.to_bits(), t.to_bits());
        prop_assert_eq!(w.grid(), v.grid());
        for i in 0..3 {
            prop_assert_eq!(w.component(i), v.component(i));
        }
    }

    #[test]
    fn fit_is_invariant_under_prefactor(p in -3.0f64..0.0, c in 1e-6f64..1e6) {
        let t: Vec<f64> = (1..=40).map(|i| i as f64).collect();
        let y: Vec<f64> = t.iter().map(|x| c * x.powf(p)).collect();
        let f = fit_power_law("y", &t, &y, (1.0, 40.0)).unwrap();
        prop_assert!((f.exponent - p).abs() < 1e-10);
        prop_assert!((f.prefactor / c - 1.0).abs() < 1e-8);
    }
}

#[test]
fn hermitian_symmetry_survives_the_nonlinearity() {
    let g = grid();
    let v = random_div_free(&g, 1);
    let n = nonlinear_term(&v, Dealias::None);
    assert!(n.hermitian_defect() <= 1e-12 * n.max_abs());
    assert_eq!(n.component(0).coeffs()[0], Complex64::default());
}
