//! Binary field checkpoints, little-endian throughout:
//!
//! ```text
//! "ANSD"  u32 version  u32 n_h  u32 n_h  u32 n_v  f64 l_h  f64 l_v  f64 t
//! then v1, v2, v3, each as n_h * n_h * n_v (re, im) f64 pairs in storage order
//! ```
//!
//! Storage order is `i1 + n_h (i2 + n_h i3)`, `m1` fastest.

use std::io::{Read, Write};
use std::path::Path;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{Grid3, SpectralScalarField, SpectralVectorField};

pub const MAGIC: &[u8; 4] = b"ANSD";
pub const VERSION: u32 = 1;

pub fn write_checkpoint<W: Write>(mut w: W, v: &SpectralVectorField, t: f64) -> Result<()> {
    let g = v.grid();
    let mut buf = Vec::with_capacity(44 + 48 * g.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    for n in [g.n_h, g.n_h, g.n_v] {
        let n = u32::try_from(n).map_err(|_| Error::Checkpoint(format!("dimension {n} exceeds u32")))?;
        buf.extend_from_slice(&n.to_le_bytes());
    }
    for x in [g.l_h, g.l_v, t] {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    for c in v.components() {
        for z in c.coeffs() {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    w.write_all(&buf).map_err(|e| Error::Checkpoint(e.to_string()))
}

fn take<const N: usize>(bytes: &[u8], at: &mut usize) -> Result<[u8; N]> {
    let end = *at + N;
    let out = bytes
        .get(*at..end)
        .ok_or_else(|| Error::Checkpoint(format!("truncated at byte {}", *at)))?;
    *at = end;
    Ok(out.try_into().expect("slice of length N"))
}

/// `(field, t)` from a checkpoint.
pub fn read_checkpoint<R: Read>(mut r: R) -> Result<(SpectralVectorField, f64)> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| Error::Checkpoint(e.to_string()))?;
    let mut at = 0;
    if &take::<4>(&bytes, &mut at)? != MAGIC {
        return Err(Error::Checkpoint("bad magic".into()));
    }
    let version = u32::from_le_bytes(take(&bytes, &mut at)?);
    if version != VERSION {
        return Err(Error::Checkpoint(format!("unsupported version {version}")));
    }
    let mut dims = [0usize; 3];
    for d in &mut dims {
        *d = u32::from_le_bytes(take(&bytes, &mut at)?) as usize;
    }
    if dims[0] != dims[1] {
        return Err(Error::Checkpoint(format!("horizontal sizes differ: {} and {}", dims[0], dims[1])));
    }
    let l_h = f64::from_le_bytes(take(&bytes, &mut at)?);
    let l_v = f64::from_le_bytes(take(&bytes, &mut at)?);
    let t = f64::from_le_bytes(take(&bytes, &mut at)?);
    let grid = Grid3::new(dims[0], dims[2], l_h, l_v)?;
    let expected = at + 48 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Checkpoint(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let mut comps = Vec::with_capacity(3);
    for _ in 0..3 {
        let mut c = Vec::with_capacity(grid.len());
        for _ in 0..grid.len() {
            let re = f64::from_le_bytes(take(&bytes, &mut at)?);
            let im = f64::from_le_bytes(take(&bytes, &mut at)?);
            c.push(Complex64::new(re, im));
        }
        comps.push(SpectralScalarField::from_coeffs(grid, c)?);
    }
    let [a, b, c]: [SpectralScalarField; 3] = comps.try_into().expect("three components");
    Ok((SpectralVectorField::new([a, b, c])?, t))
}

pub fn save_checkpoint(path: &Path, v: &SpectralVectorField, t: f64) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_checkpoint(std::io::BufWriter::new(f), v, t)
}

pub fn load_checkpoint(path: &Path) -> Result<(SpectralVectorField, f64)> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_checkpoint(std::io::BufReader::new(f))
}
