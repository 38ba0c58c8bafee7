//! Cached 3D complex FFTs built from rustfft line transforms.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

pub(crate) struct Fft3 {
    shape: [usize; 3],
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
}

static PLANS: Lazy<Mutex<HashMap<[usize; 3], Arc<Fft3>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

thread_local! {
    static BUFFERS: RefCell<(Vec<Complex64>, Vec<Complex64>)> = const { RefCell::new((Vec::new(), Vec::new())) };
}

impl Fft3 {
    pub(crate) fn for_shape(shape: [usize; 3]) -> Arc<Fft3> {
        let mut plans = PLANS.lock().expect("fft plan cache poisoned");
        plans
            .entry(shape)
            .or_insert_with(|| {
                let mut planner = FftPlanner::new();
                let mut mk = |d| {
                    [
                        planner.plan_fft(shape[0], d),
                        planner.plan_fft(shape[1], d),
                        planner.plan_fft(shape[2], d),
                    ]
                };
                let forward = mk(FftDirection::Forward);
                let inverse = mk(FftDirection::Inverse);
                Arc::new(Fft3 {
                    shape,
                    forward,
                    inverse,
                })
            })
            .clone()
    }

    /// Unnormalized in-place transform with storage order `i1 + n1 (i2 + n2 i3)`.
    pub(crate) fn process(&self, data: &mut [Complex64], dir: Direction) {
        let [n1, n2, n3] = self.shape;
        assert_eq!(data.len(), n1 * n2 * n3);
        let plans = match dir {
            Direction::Forward => &self.forward,
            Direction::Inverse => &self.inverse,
        };
        BUFFERS.with(|cell| {
            let mut guard = cell.borrow_mut();
            let (buf, scratch) = &mut *guard;
            buf.resize(data.len(), Complex64::default());

            lines(plans[0].as_ref(), data, scratch);

            let slab = n1 * n2;
            for (s, b) in data.chunks_mut(slab).zip(buf.chunks_mut(slab)) {
                transpose(s, b, n2, n1);
            }
            lines(plans[1].as_ref(), buf, scratch);
            for (s, b) in data.chunks_mut(slab).zip(buf.chunks(slab)) {
                transpose(b, s, n1, n2);
            }

            transpose(data, buf, n3, slab);
            lines(plans[2].as_ref(), buf, scratch);
            transpose(buf, data, slab, n3);
        });
    }
}

impl Fft3 {
    /// Synthesis of data supported in the box `keep1 x keep2 x keep3`; lines that are
    /// identically zero are skipped.
    pub(crate) fn inverse_band(&self, data: &mut [Complex64], keep: [&[bool]; 3]) {
        let [n1, n2, n3] = self.shape;
        assert_eq!(data.len(), n1 * n2 * n3);
        let plans = &self.inverse;
        let slab = n1 * n2;
        BUFFERS.with(|cell| {
            let mut guard = cell.borrow_mut();
            let (buf, scratch) = &mut *guard;
            buf.resize(data.len(), Complex64::default());
            let need = max_scratch(plans);
            if scratch.len() < need {
                scratch.resize(need, Complex64::default());
            }

            for (i3, s) in data.chunks_mut(slab).enumerate() {
                if !keep[2][i3] {
                    continue;
                }
                for (i2, line) in s.chunks_mut(n1).enumerate() {
                    if keep[1][i2] {
                        plans[0].process_with_scratch(line, scratch);
                    }
                }
                let b = &mut buf[..slab];
                transpose(s, b, n2, n1);
                plans[1].process_with_scratch(b, scratch);
                transpose(b, s, n1, n2);
            }

            transpose(data, buf, n3, slab);
            lines(plans[2].as_ref(), buf, scratch);
            transpose(buf, data, slab, n3);
        });
    }

    /// Analysis keeping only the outputs in `keep1 x keep2 x keep3`; everything else is
    /// set to zero.
    pub(crate) fn forward_band(&self, data: &mut [Complex64], keep: [&[bool]; 3]) {
        let [n1, n2, n3] = self.shape;
        assert_eq!(data.len(), n1 * n2 * n3);
        let plans = &self.forward;
        let slab = n1 * n2;
        BUFFERS.with(|cell| {
            let mut guard = cell.borrow_mut();
            let (buf, scratch) = &mut *guard;
            buf.resize(data.len(), Complex64::default());
            let need = max_scratch(plans);
            if scratch.len() < need {
                scratch.resize(need, Complex64::default());
            }

            transpose(data, buf, n3, slab);
            lines(plans[2].as_ref(), buf, scratch);
            transpose(buf, data, slab, n3);

            for (i3, s) in data.chunks_mut(slab).enumerate() {
                if !keep[2][i3] {
                    s.fill(Complex64::default());
                    continue;
                }
                let b = &mut buf[..slab];
                transpose(s, b, n2, n1);
                plans[1].process_with_scratch(b, scratch);
                transpose(b, s, n1, n2);
                for (i2, line) in s.chunks_mut(n1).enumerate() {
                    if keep[1][i2] {
                        plans[0].process_with_scratch(line, scratch);
                        for (z, &k) in line.iter_mut().zip(keep[0]) {
                            if !k {
                                *z = Complex64::default();
                            }
                        }
                    } else {
                        line.fill(Complex64::default());
                    }
                }
            }
        });
    }
}

fn max_scratch(plans: &[Arc<dyn Fft<f64>>; 3]) -> usize {
    plans.iter().map(|p| p.get_inplace_scratch_len()).max().unwrap_or(0)
}

fn lines(fft: &dyn Fft<f64>, data: &mut [Complex64], scratch: &mut Vec<Complex64>) {
    let n = fft.len();
    let threads = rayon::current_num_threads();
    if threads > 1 && data.len() >= 4 * n * threads {
        let rows = data.len() / n;
        let per = rows.div_ceil(threads);
        data.par_chunks_mut(per * n).for_each(|chunk| fft.process(chunk));
    } else {
        let need = fft.get_inplace_scratch_len();
        if scratch.len() < need {
            scratch.resize(need, Complex64::default());
        }
        fft.process_with_scratch(data, scratch);
    }
}

/// `dst[c][r] = src[r][c]` for a row-major `rows x cols` source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const B: usize = 16;
    for r0 in (0..rows).step_by(B) {
        for c0 in (0..cols).step_by(B) {
            for r in r0..(r0 + B).min(rows) {
                for c in c0..(c0 + B).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}
