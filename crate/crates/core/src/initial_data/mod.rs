//! Divergence-free initial data with anisotropic spectral envelopes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood_paley::{BlockDirection, DyadicFilterBank};
use crate::norms::{b0half_norm, data_functionals, InitialDataReport};
use crate::spectral::{leray_project, signed_mode, Grid3, SpectralScalarField, SpectralVectorField};

/// `|v̂0(k)| ~ amplitude |k_h|^{a_h} |k_3|^{b_v} exp(-|k|² / (2 sigma²))` with random
/// Gaussian phases, zero on the planes `k_h = 0` and `k_3 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralEnvelope {
    pub a_h: f64,
    pub b_v: f64,
    pub sigma: f64,
    pub amplitude: f64,
    pub seed: u64,
}

impl Default for SpectralEnvelope {
    fn default() -> Self {
        Self {
            a_h: 0.0,
            b_v: 1.0,
            sigma: 1.0,
            amplitude: 1.0,
            seed: 1,
        }
    }
}

impl SpectralEnvelope {
    /// Checks the envelope against the decay hypotheses for `s`:
    /// `a_h > s - 1` (`Ḣ^{-s,0}` near `k_h = 0`) and `b_v > s/2 - 1/4`
    /// (`Ḣ^{-s,-s/2-1/4}` near `k_3 = 0`).
    pub fn validate(&self, s: f64) -> Result<()> {
        for (name, x) in [("a_h", self.a_h), ("b_v", self.b_v), ("sigma", self.sigma), ("amplitude", self.amplitude)] {
            if !x.is_finite() {
                return Err(Error::param(name, format!("{x} is not finite")));
            }
        }
        if self.sigma <= 0.0 {
            return Err(Error::param("sigma", format!("{} must be positive", self.sigma)));
        }
        if self.amplitude < 0.0 {
            return Err(Error::param("amplitude", format!("{} must be nonnegative", self.amplitude)));
        }
        if self.a_h <= s - 1.0 {
            return Err(Error::param(
                "a_h",
                format!("{} must exceed s - 1 = {} for data in Ḣ^(-s,0)", self.a_h, s - 1.0),
            ));
        }
        if self.b_v <= s / 2.0 - 0.25 {
            return Err(Error::param(
                "b_v",
                format!("{} must exceed s/2 - 1/4 = {} for data in Ḣ^(-s,-s/2-1/4)", self.b_v, s / 2.0 - 0.25),
            ));
        }
        Ok(())
    }

    /// Envelope magnitude at a wavevector.
    pub fn weight(&self, k: [f64; 3]) -> f64 {
        let kh2 = k[0] * k[0] + k[1] * k[1];
        let k3 = k[2].abs();
        if kh2 == 0.0 || k3 == 0.0 {
            return 0.0;
        }
        let k2 = kh2 + k3 * k3;
        self.amplitude * kh2.powf(0.5 * self.a_h) * k3.powf(self.b_v) * (-k2 / (2.0 * self.sigma * self.sigma)).exp()
    }

    /// Unprojected random field under the envelope, restricted to the 2/3 band. Mode `m`
    /// draws from a generator seeded by `(seed, m)`, so a mode's value does not depend on
    /// the resolution.
    pub fn sample(&self, grid: &Grid3) -> SpectralVectorField {
        let mut comps: [SpectralScalarField; 3] = std::array::from_fn(|_| SpectralScalarField::zeros(*grid));
        let w = grid.wavenumbers();
        for i3 in 0..grid.n_v {
            let m3 = signed_mode(i3, grid.n_v);
            // fundamental half-space m3 > 0; the plane m3 = 0 stays zero
            if m3 <= 0 {
                continue;
            }
            for i2 in 0..grid.n_h {
                for i1 in 0..grid.n_h {
                    if !w.in_band(i1, i2, i3) {
                        continue;
                    }
                    let amp = self.weight([w.k1[i1], w.k2[i2], w.k3[i3]]);
                    if amp == 0.0 {
                        continue;
                    }
                    let m = [signed_mode(i1, grid.n_h), signed_mode(i2, grid.n_h), m3];
                    let mut rng = ChaCha8Rng::seed_from_u64(mode_seed(self.seed, m));
                    let idx = grid.index(i1, i2, i3);
                    let mirror = grid.mirror(idx);
                    for c in comps.iter_mut() {
                        let re: f64 = StandardNormal.sample(&mut rng);
                        let im: f64 = StandardNormal.sample(&mut rng);
                        let z = Complex64::new(re, im) * (amp * std::f64::consts::FRAC_1_SQRT_2);
                        c.coeffs_mut()[idx] = z;
                        c.coeffs_mut()[mirror] = z.conj();
                    }
                }
            }
        }
        SpectralVectorField::new(comps).expect("shared grid")
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mode_seed(seed: u64, m: [i64; 3]) -> u64 {
    m.iter().fold(splitmix(seed), |h, &x| splitmix(h ^ x as u64))
}

/// Projected field under `envelope` and its data functionals for `(s, s1)`.
///
/// Errors if the envelope is incompatible with `s`, the parameter gate fails, or any
/// mass lands on a singular plane.
pub fn generate(
    envelope: &SpectralEnvelope,
    grid: &Grid3,
    s: f64,
    s1: f64,
) -> Result<(SpectralVectorField, InitialDataReport)> {
    envelope.validate(s)?;
    let v0 = leray_project(&envelope.sample(grid));
    let report = data_functionals(&v0, s, s1)?;
    if report.excluded_l2_sq != 0.0 {
        return Err(Error::param(
            "envelope",
            format!("singular planes carry mass {:e}", report.excluded_l2_sq),
        ));
    }
    Ok((v0, report))
}

/// `c v0` with `‖c v0‖_{B^{0,1/2}} = target_c0`.
pub fn rescale_to_smallness(v0: &SpectralVectorField, target_c0: f64) -> Result<SpectralVectorField> {
    if !(target_c0.is_finite() && target_c0 >= 0.0) {
        return Err(Error::param("target_c0", format!("{target_c0} must be finite and nonnegative")));
    }
    let bank = DyadicFilterBank::for_grid(*v0.grid(), BlockDirection::Vertical)?;
    let norm = b0half_norm(v0, &bank)?;
    if norm == 0.0 {
        return Err(Error::param("v0", "cannot rescale the zero field"));
    }
    let mut out = v0.scaled(target_c0 / norm);
    out.div_free = v0.div_free;
    Ok(out)
}

/// `v_λ(x) = λ v0(λ x)` for `λ = 2^m`.
///
/// The box shrinks to `L / λ` and every coefficient keeps its storage index, so the
/// mode of wavenumber `k` moves to `λ k` and its coefficient is multiplied by `λ`. With
/// the volume factor `λ^{-3}` this gives `‖v_λ‖ = λ^{-1/2} ‖v0‖` exactly.
pub fn scaling_transform(v0: &SpectralVectorField, lambda: f64) -> Result<SpectralVectorField> {
    let m = lambda.log2();
    if !(lambda > 0.0 && lambda.is_finite() && m == m.round() && m.abs() <= 30.0) {
        return Err(Error::param("lambda", format!("{lambda} is not a power of two")));
    }
    let g = *v0.grid();
    let grid = Grid3::new(g.n_h, g.n_v, g.l_h / lambda, g.l_v / lambda)?;
    let comps = v0.components().clone().map(|c| {
        SpectralScalarField::from_coeffs(grid, c.into_coeffs().into_iter().map(|z| z * lambda).collect())
            .expect("same length")
    });
    let mut out = SpectralVectorField::new(comps)?;
    out.div_free = v0.div_free;
    Ok(out)
}
