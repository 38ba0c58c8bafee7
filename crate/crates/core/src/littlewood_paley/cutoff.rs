//! The smooth low-pass `χ` and annulus cutoff `φ = χ(·/2) - χ`.
//!
//! `χ` equals 1 on `[0, 3/4]`, vanishes on `[4/3, ∞)` and interpolates with the
//! `exp(-1/x)` smooth step, so `φ` is supported in `[3/4, 8/3]` and the dyadic sums
//! telescope: `χ(τ) + Σ_{j=0}^{J} φ(2^{-j} τ) = χ(2^{-J-1} τ)`.

pub const CHI_FLAT: f64 = 0.75;
pub const CHI_EDGE: f64 = 4.0 / 3.0;
pub const PHI_INNER: f64 = 0.75;
pub const PHI_OUTER: f64 = 8.0 / 3.0;

#[inline]
fn bump(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// C^∞ step: 0 for `x <= 0`, 1 for `x >= 1`.
#[inline]
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = bump(x);
        a / (a + bump(1.0 - x))
    }
}

#[inline]
pub fn chi(tau: f64) -> f64 {
    let t = tau.abs();
    if t <= CHI_FLAT {
        1.0
    } else if t >= CHI_EDGE {
        0.0
    } else {
        smooth_step((CHI_EDGE - t) / (CHI_EDGE - CHI_FLAT))
    }
}

#[inline]
pub fn phi(tau: f64) -> f64 {
    chi(0.5 * tau) - chi(tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointwise_values() {
        assert_eq!(chi(0.5), 1.0);
        assert_eq!(phi(0.5), 0.0);
        assert_eq!(phi(0.75), 0.0);
        assert_eq!(phi(8.0 / 3.0), 0.0);
        assert_eq!(chi(4.0 / 3.0), 0.0);
        assert_eq!(phi(1.5), 1.0);
        // χ(1) from the step at x = 4/7: 1 / (1 + e^{-1/(4/7) + 1/(3/7)}) = 1 / (1 + e^{-7/12})
        let chi1 = 1.0 / (1.0 + (-7.0f64 / 12.0).exp());
        assert!((chi(1.0) - chi1).abs() < 1e-15);
        assert!((phi(1.0) - (1.0 - chi1)).abs() < 1e-15);
    }

    #[test]
    fn supports() {
        for i in 0..=4000 {
            let t = i as f64 * 1e-3;
            if !(PHI_INNER..=PHI_OUTER).contains(&t) {
                assert_eq!(phi(t), 0.0, "phi({t})");
            }
            if t >= CHI_EDGE {
                assert_eq!(chi(t), 0.0);
            }
            assert!((0.0..=1.0).contains(&phi(t)));
        }
    }

    #[test]
    fn smooth_step_is_monotone() {
        let mut prev = 0.0;
        for i in 0..=1000 {
            let s = smooth_step(i as f64 / 1000.0);
            assert!(s >= prev);
            prev = s;
        }
        assert!((smooth_step(0.5) - 0.5).abs() < 1e-15);
    }
}
