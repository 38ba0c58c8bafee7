//! Per-grid lookup tables shared by the hot loops.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use super::grid::{Grid3, Wavenumbers};

pub(crate) struct GridTables {
    pub waves: Wavenumbers,
    /// Storage indices inside the 2/3 band, in storage order.
    pub band: Vec<usize>,
    /// Derivative wavevector of each entry of `band`.
    pub band_d: Vec<[f64; 3]>,
    /// `mirror[idx]` is the storage index of `-m`.
    pub mirror: Vec<usize>,
}

type Key = (usize, usize, u64, u64);

static TABLES: Lazy<Mutex<HashMap<Key, Arc<GridTables>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

impl GridTables {
    pub(crate) fn get(g: &Grid3) -> Arc<GridTables> {
        let key = (g.n_h, g.n_v, g.l_h.to_bits(), g.l_v.to_bits());
        let mut cache = TABLES.lock().expect("grid table cache poisoned");
        cache.entry(key).or_insert_with(|| Arc::new(Self::build(g))).clone()
    }

    fn build(g: &Grid3) -> Self {
        let waves = g.wavenumbers();
        let (nh, nv) = (g.n_h, g.n_v);
        let mut band = Vec::new();
        let mut band_d = Vec::new();
        let mut mirror = vec![0; g.len()];
        for i3 in 0..nv {
            let j3 = (nv - i3) % nv;
            for i2 in 0..nh {
                let j2 = (nh - i2) % nh;
                for i1 in 0..nh {
                    let idx = g.index(i1, i2, i3);
                    mirror[idx] = g.index((nh - i1) % nh, j2, j3);
                    if waves.in_band(i1, i2, i3) {
                        band.push(idx);
                        band_d.push(waves.deriv(i1, i2, i3));
                    }
                }
            }
        }
        Self {
            waves,
            band,
            band_d,
            mirror,
        }
    }
}
