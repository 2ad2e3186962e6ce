//! Binary cache of exponential-sum tables.
//!
//! Layout, little endian: magic `TLBS`, format version `u32`, `q: u64`,
//! `d: u32`, polynomial fingerprint `u64`, `c1: f64`, entry count `u64`,
//! then `(re, im)` pairs of `f64`, then the SHA-256 of everything before it.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fieldsum::{IntPoly, SumTable};

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"TLBS";
const HEADER: usize = 4 + 4 + 8 + 4 + 8 + 8 + 8;

/// Cache file name for a table of `poly` modulo `q`.
pub fn cache_path(dir: &Path, poly: &IntPoly, q: u64) -> PathBuf {
    dir.join(format!("sums-{:016x}-q{q}.bin", poly.fingerprint()))
}

pub fn encode_table(t: &SumTable) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER + 16 * t.values.len() + 32);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&t.q.to_le_bytes());
    buf.extend_from_slice(&(t.dim as u32).to_le_bytes());
    buf.extend_from_slice(&t.poly.fingerprint().to_le_bytes());
    buf.extend_from_slice(&t.c1.to_le_bytes());
    buf.extend_from_slice(&(t.values.len() as u64).to_le_bytes());
    for v in &t.values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

fn word<const N: usize>(b: &[u8], at: usize) -> [u8; N] {
    b[at..at + N].try_into().expect("length checked")
}

/// Decodes a table; `poly` must be the polynomial the file was written for.
pub fn decode_table(bytes: &[u8], poly: &IntPoly) -> Result<SumTable> {
    if bytes.len() < 8 || &bytes[..4] != MAGIC {
        return Err(Error::Checksum);
    }
    let version = u32::from_le_bytes(word(bytes, 4));
    if version != CACHE_VERSION {
        return Err(Error::Version { found: version, expected: CACHE_VERSION });
    }
    if bytes.len() < HEADER + 32 {
        return Err(Error::Checksum);
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return Err(Error::Checksum);
    }
    let q = u64::from_le_bytes(word(body, 8));
    let dim = u32::from_le_bytes(word(body, 16)) as usize;
    let fp = u64::from_le_bytes(word(body, 20));
    let c1 = f64::from_le_bytes(word(body, 28));
    let len = u64::from_le_bytes(word(body, 36)) as usize;
    if fp != poly.fingerprint() || dim != poly.num_vars() {
        return Err(Error::Parse("cache file belongs to a different polynomial".into()));
    }
    if body.len() != HEADER + 16 * len {
        return Err(Error::Checksum);
    }
    let values = (0..len)
        .map(|i| {
            let at = HEADER + 16 * i;
            Complex64::new(f64::from_le_bytes(word(body, at)), f64::from_le_bytes(word(body, at + 8)))
        })
        .collect();
    Ok(SumTable { q, dim, poly: poly.clone(), c1, values })
}

pub fn write_table(path: &Path, t: &SumTable) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    // Write to a sibling and rename so readers never see a partial file.
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode_table(t))?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_table(path: &Path, poly: &IntPoly) -> Result<SumTable> {
    decode_table(&fs::read(path)?, poly)
}

/// Writes `t` and reads it back.
pub fn cache_roundtrip(dir: &Path, t: &SumTable) -> Result<SumTable> {
    let path = cache_path(dir, &t.poly, t.q);
    write_table(&path, t)?;
    read_table(&path, &t.poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldsum::build_sum_table;

    fn table() -> SumTable {
        build_sum_table(&IntPoly::parse("x^3+y^3", None).unwrap(), 7, 0.1, 1e10, false).unwrap()
    }

    #[test]
    fn bit_identical_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let t = table();
        let back = cache_roundtrip(dir.path(), &t).unwrap();
        assert_eq!(back.q, t.q);
        assert_eq!(back.c1.to_bits(), t.c1.to_bits());
        assert!(back.values.iter().zip(&t.values).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits()));
    }

    #[test]
    fn corruption_and_version() {
        let t = table();
        let bytes = encode_table(&t);
        assert!(matches!(decode_table(&bytes[..bytes.len() - 5], &t.poly), Err(Error::Checksum)));
        let mut flipped = bytes.clone();
        flipped[HEADER + 3] ^= 1;
        assert!(matches!(decode_table(&flipped, &t.poly), Err(Error::Checksum)));
        let mut old = bytes.clone();
        old[4..8].copy_from_slice(&7u32.to_le_bytes());
        assert!(matches!(decode_table(&old, &t.poly), Err(Error::Version { found: 7, .. })));
        let other = IntPoly::parse("x^3+2*y^3", None).unwrap();
        assert!(decode_table(&bytes, &other).is_err());
    }
}
