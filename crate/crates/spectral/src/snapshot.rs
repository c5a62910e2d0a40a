//! Binary field snapshots.
//!
//! Layout: magic "RCSF", format version (u32), component count (u32),
//! nx, ny, nz (u32 each), ly (f64), time (f64), frame tag (u32, 0=stationary,
//! 1=moving), then coefficients as interleaved (re, im) f64 pairs in
//! component-major, k-major, η-major, l-minor order. All integers and floats
//! little-endian. The dealias fraction is not stored; readers get the 2/3
//! default.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::SpectralError;
use crate::field::{Frame, SpectralField};
use crate::grid::Grid;
use crate::Result;

pub const MAGIC: [u8; 4] = *b"RCSF";
pub const VERSION: u32 = 1;

pub fn write_snapshot(field: &SpectralField, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&MAGIC)?;
    write_u32(&mut w, VERSION)?;
    write_u32(&mut w, field.components() as u32)?;
    write_u32(&mut w, field.grid().nx() as u32)?;
    write_u32(&mut w, field.grid().ny() as u32)?;
    write_u32(&mut w, field.grid().nz() as u32)?;
    write_f64(&mut w, field.grid().ly())?;
    write_f64(&mut w, field.time)?;
    write_u32(
        &mut w,
        match field.frame() {
            Frame::Stationary => 0,
            Frame::Moving => 1,
        },
    )?;
    for c in field.coeffs() {
        write_f64(&mut w, c.re)?;
        write_f64(&mut w, c.im)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_snapshot(path: &Path) -> Result<SpectralField> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != MAGIC {
        return Err(SpectralError::Snapshot(format!(
            "bad magic {magic:?}, expected {MAGIC:?}"
        )));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(SpectralError::Snapshot(format!(
            "unsupported format version {version}"
        )));
    }
    let components = read_u32(&mut r)? as usize;
    if components != 1 && components != 3 {
        return Err(SpectralError::Snapshot(format!(
            "component count {components} not in {{1,3}}"
        )));
    }
    let nx = read_u32(&mut r)? as usize;
    let ny = read_u32(&mut r)? as usize;
    let nz = read_u32(&mut r)? as usize;
    let ly = read_f64(&mut r)?;
    let time = read_f64(&mut r)?;
    let frame = match read_u32(&mut r)? {
        0 => Frame::Stationary,
        1 => Frame::Moving,
        tag => {
            return Err(SpectralError::Snapshot(format!("unknown frame tag {tag}")));
        }
    };
    let grid = Grid::new(nx, ny, nz, ly)?;
    let n = grid.len() * components;
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        coeffs.push(Complex64::new(re, im));
    }
    SpectralField::from_coeffs(grid, components, frame, time, coeffs)
}

fn write_u32<W: Write>(w: &mut W, v: u32) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn write_f64<W: Write>(w: &mut W, v: f64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn read_u32<R: Read>(r: &mut R) -> std::io::Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64<R: Read>(r: &mut R) -> std::io::Result<f64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(f64::from_le_bytes(buf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn roundtrip_preserves_everything() {
        let grid = Grid::new(8, 4, 4, 6.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut f = SpectralField::zeros(grid, 3, Frame::Moving, 2.25);
        for v in f.coeffs_mut() {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field.rcsf");
        write_snapshot(&f, &path).unwrap();
        let g = read_snapshot(&path).unwrap();
        assert_eq!(g.components(), 3);
        assert_eq!(g.frame(), Frame::Moving);
        assert_eq!(g.time, 2.25);
        assert_eq!(g.grid().nx(), 8);
        assert_eq!(g.grid().ly(), 6.5);
        assert_eq!(f.coeffs(), g.coeffs());
    }

    #[test]
    fn rejects_corrupted_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.rcsf");
        std::fs::write(&path, b"NOPE").unwrap();
        assert!(matches!(
            read_snapshot(&path),
            Err(SpectralError::Snapshot(_)) | Err(SpectralError::Io(_))
        ));
    }

    #[test]
    fn header_bytes_are_as_documented() {
        let grid = Grid::new(4, 4, 4, 1.0).unwrap();
        let f = SpectralField::zeros(grid, 1, Frame::Stationary, 0.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("hdr.rcsf");
        write_snapshot(&f, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[0..4], b"RCSF");
        assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 4);
        // header: 4 magic + 5 u32 + 2 f64 + 1 u32 = 44 bytes, then 64 modes × 16 bytes.
        assert_eq!(bytes.len(), 44 + 64 * 16);
    }
}
