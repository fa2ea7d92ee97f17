//! Binary snapshot files.
//!
//! Layout, little-endian throughout:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `ZAKS` |
//! | 2 | version (`1`) |
//! | 2 | flags (`0`) |
//! | 4 | points per axis `n` |
//! | 8 × 4 | `L`, `t`, `n_mean`, `nt_mean` |
//! | 16·n³ | `u`, interleaved real/imaginary, x fastest |
//! | 8·n³ | `n` |
//! | 8·n³ | `∂ₜn` |

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, FormatError, Result};
use crate::model::{State, ZeroModes};
use crate::spectral::{Complex64, Field, Grid, Space};

pub const MAGIC: [u8; 4] = *b"ZAKS";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 44;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnapshotHeader {
    pub version: u16,
    pub flags: u16,
    pub n: usize,
    pub length: f64,
    pub t: f64,
    pub means: ZeroModes,
}

impl SnapshotHeader {
    pub fn payload_len(&self) -> usize {
        32 * self.n.pow(3)
    }

    pub fn file_len(&self) -> usize {
        HEADER_LEN + self.payload_len()
    }
}

pub fn encode_snapshot(state: &State) -> Vec<u8> {
    let grid = state.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 32 * grid.len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&0u16.to_le_bytes());
    out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    for v in [grid.length(), state.t, state.means.n_mean, state.means.nt_mean] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for z in state.u.to_physical().values() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    for f in [&state.n, &state.n_t] {
        for z in f.to_physical().values() {
            out.extend_from_slice(&z.re.to_le_bytes());
        }
    }
    out
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("eight bytes"))
}

pub fn decode_header(bytes: &[u8]) -> Result<SnapshotHeader, FormatError> {
    if bytes.len() < HEADER_LEN {
        return Err(FormatError::Truncated {
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }
    let magic: [u8; 4] = bytes[0..4].try_into().expect("four bytes");
    if magic != MAGIC {
        return Err(FormatError::BadMagic(magic));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let flags = u16::from_le_bytes([bytes[6], bytes[7]]);
    if flags != 0 {
        return Err(FormatError::UnknownFlags(flags));
    }
    let n = u32::from_le_bytes(bytes[8..12].try_into().expect("four bytes")) as usize;
    if n < 2 || n % 2 != 0 || n > 4096 {
        return Err(FormatError::InvalidHeader(format!("points per axis {n}")));
    }
    let header = SnapshotHeader {
        version,
        flags,
        n,
        length: f64_at(bytes, 12),
        t: f64_at(bytes, 20),
        means: ZeroModes {
            n_mean: f64_at(bytes, 28),
            nt_mean: f64_at(bytes, 36),
        },
    };
    if !(header.length.is_finite() && header.length > 0.0) {
        return Err(FormatError::InvalidHeader(format!("box length {}", header.length)));
    }
    if ![header.t, header.means.n_mean, header.means.nt_mean]
        .iter()
        .all(|v| v.is_finite())
    {
        return Err(FormatError::InvalidHeader("non-finite time or mean".into()));
    }
    Ok(header)
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<State> {
    let h = decode_header(bytes)?;
    let expected = h.file_len();
    if bytes.len() < expected {
        return Err(FormatError::Truncated {
            expected,
            actual: bytes.len(),
        }
        .into());
    }
    if bytes.len() > expected {
        return Err(FormatError::TrailingBytes(bytes.len() - expected).into());
    }
    let grid = Grid::new(h.n, h.length).map_err(|e| FormatError::InvalidHeader(e.to_string()))?;
    let m = grid.len();
    let body = &bytes[HEADER_LEN..];
    let u: Vec<Complex64> = (0..m)
        .map(|i| Complex64::new(f64_at(body, 16 * i), f64_at(body, 16 * i + 8)))
        .collect();
    let real = |offset: usize| -> Vec<Complex64> {
        (0..m).map(|i| Complex64::new(f64_at(body, offset + 8 * i), 0.0)).collect()
    };
    let n = real(16 * m);
    let nt = real(24 * m);
    let field = |v| Field::from_values(grid, Space::Physical, v).expect("length matches grid");
    Ok(State {
        u: field(u),
        n: field(n),
        n_t: field(nt),
        means: h.means,
        t: h.t,
    })
}

pub fn write_snapshot(state: &State, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(&encode_snapshot(state)).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<State> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_snapshot(&bytes)
}

pub fn read_snapshot_header(path: &Path) -> Result<SnapshotHeader> {
    let mut buf = Vec::with_capacity(HEADER_LEN);
    File::open(path)
        .and_then(|f| f.take(HEADER_LEN as u64).read_to_end(&mut buf))
        .map_err(|e| Error::io(path, e))?;
    Ok(decode_header(&buf)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(seed: u64) -> State {
        let grid = Grid::new(8, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = State::zero(grid);
        for v in s.u.values_mut() {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        for v in s.n.values_mut().iter_mut().chain(s.n_t.values_mut()) {
            *v = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
        }
        s.means = ZeroModes {
            n_mean: 0.25,
            nt_mean: -1e-300,
        };
        s.t = 1.0 / 3.0;
        s
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let s = random_state(1);
        let back = decode_snapshot(&encode_snapshot(&s)).unwrap();
        assert_eq!(back.u.values(), s.u.values());
        assert_eq!(back.n.values(), s.n.values());
        assert_eq!(back.n_t.values(), s.n_t.values());
        assert_eq!(back.t.to_bits(), s.t.to_bits());
        assert_eq!(back.means, s.means);
        assert_eq!(back.grid(), s.grid());
    }

    #[test]
    fn header_faults_are_format_errors() {
        let bytes = encode_snapshot(&random_state(2));
        let mut bad = bytes.clone();
        bad[0] ^= 0xff;
        assert!(matches!(decode_snapshot(&bad), Err(Error::Format(FormatError::BadMagic(_)))));
        let mut bad = bytes.clone();
        bad[4] = 2;
        assert!(matches!(
            decode_snapshot(&bad),
            Err(Error::Format(FormatError::UnsupportedVersion(2)))
        ));
        let mut bad = bytes.clone();
        bad[6] = 1;
        assert!(matches!(decode_snapshot(&bad), Err(Error::Format(FormatError::UnknownFlags(1)))));
        let mut bad = bytes.clone();
        bad[8] = 10;
        assert!(matches!(decode_snapshot(&bad), Err(Error::Format(_))));
        assert!(matches!(
            decode_snapshot(&bytes[..bytes.len() - 1]),
            Err(Error::Format(FormatError::Truncated { .. }))
        ));
        let mut long = bytes.clone();
        long.push(0);
        assert!(matches!(
            decode_snapshot(&long),
            Err(Error::Format(FormatError::TrailingBytes(1)))
        ));
    }
}
