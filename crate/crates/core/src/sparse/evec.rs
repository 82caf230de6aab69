//! Flat binary eigenvector blocks.
//!
//! Layout (little endian): 8-byte magic `NLABEVEC`, `n: u64`, `k: u64`,
//! `h: f64`, then `n·k` f64 values row-major (row = grid cell, column = pair).

use std::io::Read;
use std::path::Path;

use super::Spectrum;
use crate::error::{Error, Result};

pub const EVEC_MAGIC: &[u8; 8] = b"NLABEVEC";

#[derive(Debug, Clone, PartialEq)]
pub struct EigenvectorBlock {
    pub n: usize,
    pub k: usize,
    pub h: f64,
    /// One vector per pair.
    pub vectors: Vec<Vec<f64>>,
}

pub fn encode_eigenvectors(s: &Spectrum) -> Vec<u8> {
    let k = s.k();
    let n = s.eigenvectors.first().map_or(0, Vec::len);
    let mut out = Vec::with_capacity(32 + 8 * n * k);
    out.extend_from_slice(EVEC_MAGIC);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&(k as u64).to_le_bytes());
    out.extend_from_slice(&s.h.to_le_bytes());
    for i in 0..n {
        for v in &s.eigenvectors {
            out.extend_from_slice(&v[i].to_le_bytes());
        }
    }
    out
}

pub fn write_eigenvectors(s: &Spectrum, path: &Path) -> Result<()> {
    crate::experiment::write_atomic(path, &encode_eigenvectors(s))
}

pub fn decode_eigenvectors(mut bytes: &[u8]) -> Result<EigenvectorBlock> {
    let mut header = [0u8; 32];
    bytes
        .read_exact(&mut header)
        .map_err(|_| Error::InvalidParameter("eigenvector file shorter than header".into()))?;
    if &header[..8] != EVEC_MAGIC {
        return Err(Error::InvalidParameter("bad eigenvector magic".into()));
    }
    let word = |o: usize| u64::from_le_bytes(header[o..o + 8].try_into().unwrap());
    let n = word(8) as usize;
    let k = word(16) as usize;
    let h = f64::from_bits(word(24));
    if bytes.len() != 8 * n * k {
        return Err(Error::DimensionMismatch {
            expected: 8 * n * k,
            got: bytes.len(),
        });
    }
    let mut vectors = vec![vec![0.0; n]; k];
    for (p, chunk) in bytes.chunks_exact(8).enumerate() {
        vectors[p % k.max(1)][p / k.max(1)] = f64::from_le_bytes(chunk.try_into().unwrap());
    }
    Ok(EigenvectorBlock { n, k, h, vectors })
}

pub fn read_eigenvectors(path: &Path) -> Result<EigenvectorBlock> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    decode_eigenvectors(&bytes)
}
