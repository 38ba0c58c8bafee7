use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::Fft3;
use super::field::{forward_pair, inverse_pair, SpectralScalarField, SpectralVectorField};
use super::grid::Grid3;
use super::tables::GridTables;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dealias {
    /// Truncate inputs and products to `3|m_i| < n_i` on every axis.
    #[default]
    TwoThirds,
    /// Plain pseudo-spectral products, aliasing included.
    None,
}

/// Spectral coefficients of the symmetric products `v^j v^m`.
///
/// Banded products store only the 2/3 band, addressed by position in
/// [`GridTables::band`]; full products are addressed by storage index.
pub(crate) struct Products {
    grid: Grid3,
    q: [Vec<Complex64>; 6],
    band: Option<Arc<GridTables>>,
}

const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

#[inline]
fn slot(j: usize, m: usize) -> usize {
    const SLOTS: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];
    SLOTS[j][m]
}

impl Products {
    /// Coefficient of `v^j v^m` at support position `pos` (see [`Products::for_each`]).
    #[inline]
    pub(crate) fn get(&self, j: usize, m: usize, pos: usize) -> Complex64 {
        self.q[slot(j, m)][pos]
    }

    pub(crate) fn grid(&self) -> &Grid3 {
        &self.grid
    }

    /// Visits every mode that can be nonzero as `(pos, storage index, derivative k)`.
    pub(crate) fn for_each(&self, mut f: impl FnMut(usize, usize, [f64; 3])) {
        match &self.band {
            Some(t) => {
                for (pos, (&idx, &d)) in t.band.iter().zip(&t.band_d).enumerate() {
                    f(pos, idx, d);
                }
            }
            None => {
                let g = self.grid;
                let t = GridTables::get(&g);
                let w = &t.waves;
                for i3 in 0..g.n_v {
                    for i2 in 0..g.n_h {
                        for i1 in 0..g.n_h {
                            let idx = g.index(i1, i2, i3);
                            f(idx, idx, w.deriv(i1, i2, i3));
                        }
                    }
                }
            }
        }
    }
}

thread_local! {
    static PACKED: RefCell<[Vec<Complex64>; 3]> = const { RefCell::new([Vec::new(), Vec::new(), Vec::new()]) };
}

/// Computes `(v^j v^m)^` pseudo-spectrally. Under [`Dealias::TwoThirds`] the inputs and
/// the products are truncated, which makes the result the exact convolution restricted
/// to the band.
pub(crate) fn products(v: &SpectralVectorField, rule: Dealias) -> Products {
    let [a, b, c] = v.components();
    products_of(v.grid(), [a.coeffs(), b.coeffs(), c.coeffs()], rule)
}

/// [`products`] on raw coefficient arrays.
pub(crate) fn products_of(grid: &Grid3, comps: [&[Complex64]; 3], rule: Dealias) -> Products {
    for c in comps {
        assert_eq!(c.len(), grid.len(), "coefficient array does not match the grid");
    }
    match rule {
        Dealias::TwoThirds => products_banded(grid, comps),
        Dealias::None => products_full(grid, comps),
    }
}

fn products_banded(grid: &Grid3, comps: [&[Complex64]; 3]) -> Products {
    let g = *grid;
    let n = g.len();
    let t = GridTables::get(&g);
    let w = &t.waves;
    let keep = [&w.keep1[..], &w.keep2[..], &w.keep3[..]];
    let plan = Fft3::for_shape(g.shape());
    let [a, b, c] = comps;
    let zero = Complex64::default();
    let nb = t.band.len();
    let mut q: [Vec<Complex64>; 6] = std::array::from_fn(|_| vec![zero; nb]);

    PACKED.with(|cell| {
        let mut guard = cell.borrow_mut();
        let [p0, p1, p2] = &mut *guard;
        for p in [&mut *p0, &mut *p1, &mut *p2] {
            p.clear();
            p.resize(n, zero);
        }
        for &i in &t.band {
            p0[i] = a[i] + Complex64::i() * b[i];
            p1[i] = c[i];
        }
        plan.inverse_band(p0, keep);
        plan.inverse_band(p1, keep);

        // Pack (00, 01), (02, 11), (12, 22) as real + i imag.
        for ((z0, z1), z2) in p0.iter_mut().zip(p1.iter_mut()).zip(p2.iter_mut()) {
            let (x1, x2, x3) = (z0.re, z0.im, z1.re);
            *z0 = Complex64::new(x1 * x1, x1 * x2);
            *z1 = Complex64::new(x1 * x3, x2 * x2);
            *z2 = Complex64::new(x2 * x3, x3 * x3);
        }
        let inv_n = 1.0 / n as f64;
        for (s, packed) in [p0, p1, p2].into_iter().enumerate() {
            plan.forward_band(packed, keep);
            let (lo, hi) = q.split_at_mut(2 * s + 1);
            let (qa, qb) = (&mut lo[2 * s], &mut hi[0]);
            for (pos, &i) in t.band.iter().enumerate() {
                let z = packed[i] * inv_n;
                let zm = packed[t.mirror[i]].conj() * inv_n;
                qa[pos] = 0.5 * (z + zm);
                qb[pos] = Complex64::new(0.0, -0.5) * (z - zm);
            }
        }
    });
    Products {
        grid: g,
        q,
        band: Some(t),
    }
}

fn products_full(grid: &Grid3, comps: [&[Complex64]; 3]) -> Products {
    let g = *grid;
    let [a, b, c] = comps;
    let (x1, x2) = inverse_pair(a, b, &g);
    let zero = vec![Complex64::default(); g.len()];
    let (x3, _) = inverse_pair(c, &zero, &g);
    let x = [x1, x2, x3];

    let prod = |(j, m): (usize, usize)| -> Vec<f64> {
        x[j].iter().zip(&x[m]).map(|(p, q)| p * q).collect()
    };
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(6);
    for pair in PAIRS.chunks(2) {
        let (s, t) = forward_pair(&prod(pair[0]), &prod(pair[1]), &g);
        q.push(s);
        q.push(t);
    }
    Products {
        grid: g,
        q: q.try_into().expect("six products"),
        band: None,
    }
}

/// `(v.∇v)^_i = i k_j (v^j v^i)^`, valid for divergence-free `v`.
pub(crate) fn advection_from_products(p: &Products) -> [Vec<Complex64>; 3] {
    let g = *p.grid();
    let mut out: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::default(); g.len()]);
    p.for_each(|pos, idx, d| {
        for (i, o) in out.iter_mut().enumerate() {
            let s = p.get(0, i, pos) * d[0] + p.get(1, i, pos) * d[1] + p.get(2, i, pos) * d[2];
            o[idx] = Complex64::new(-s.im, s.re);
        }
    });
    out
}

/// `-P(v.∇v)` from precomputed products, written over `out`.
pub(crate) fn nonlinear_into(p: &Products, out: [&mut [Complex64]; 3]) {
    let zero = Complex64::default();
    let [o1, o2, o3] = out;
    for o in [&mut *o1, &mut *o2, &mut *o3] {
        assert_eq!(o.len(), p.grid.len());
        o.fill(zero);
    }
    p.for_each(|pos, idx, d| {
        let d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        if d2 == 0.0 && idx == 0 {
            return;
        }
        let mut a = [zero; 3];
        for (i, ai) in a.iter_mut().enumerate() {
            let s = p.get(0, i, pos) * d[0] + p.get(1, i, pos) * d[1] + p.get(2, i, pos) * d[2];
            *ai = Complex64::new(s.im, -s.re);
        }
        if d2 > 0.0 {
            let proj = (a[0] * d[0] + a[1] * d[1] + a[2] * d[2]) / d2;
            for (ai, dj) in a.iter_mut().zip(d) {
                *ai -= proj * dj;
            }
        }
        o1[idx] = a[0];
        o2[idx] = a[1];
        o3[idx] = a[2];
    });
}

/// `-P(v.∇v)` from precomputed products.
pub(crate) fn nonlinear_from_products(p: &Products) -> SpectralVectorField {
    let g = *p.grid();
    let mut out: [Vec<Complex64>; 3] = std::array::from_fn(|_| vec![Complex64::default(); g.len()]);
    {
        let [a, b, c] = &mut out;
        nonlinear_into(p, [a, b, c]);
    }
    let comps = out.map(|c| SpectralScalarField::from_coeffs(g, c).expect("grid-sized array"));
    SpectralVectorField::from_parts(comps, true)
}

/// `-P(v.∇v)`: physical-space products of the (truncated) field, truncation of the
/// products, divergence form in frequency, then Leray projection. The result is
/// divergence-free with zero mean.
pub fn nonlinear_term(v: &SpectralVectorField, rule: Dealias) -> SpectralVectorField {
    nonlinear_from_products(&products(v, rule))
}
