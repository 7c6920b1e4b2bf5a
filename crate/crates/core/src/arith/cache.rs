//! On-disk SPF table.
//!
//! Layout: the five bytes `NFSV1`, the limit as a little-endian `u64`, then
//! one little-endian `u32` least-prime-factor entry for each of `2..=limit`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::arith::sieve::SpfSieve;
use crate::error::{Error, Result};

pub const SPF_MAGIC: &[u8; 5] = b"NFSV1";

pub fn write_spf_cache<W: Write>(sieve: &SpfSieve, mut out: W) -> Result<()> {
    out.write_all(SPF_MAGIC)?;
    out.write_all(&sieve.limit().to_le_bytes())?;
    for &entry in sieve.table() {
        out.write_all(&entry.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_spf_cache<R: Read>(mut input: R) -> Result<SpfSieve> {
    let bad = |reason: &str| Error::Format { what: "SPF cache", reason: reason.to_string() };
    let mut magic = [0u8; 5];
    input.read_exact(&mut magic).map_err(|_| bad("truncated header"))?;
    if &magic != SPF_MAGIC {
        return Err(bad("bad magic"));
    }
    let mut limit = [0u8; 8];
    input.read_exact(&mut limit).map_err(|_| bad("truncated header"))?;
    let limit = u64::from_le_bytes(limit);
    if !(2..=u32::MAX as u64).contains(&limit) {
        return Err(bad("limit out of range"));
    }
    let mut body = Vec::new();
    input.read_to_end(&mut body)?;
    if body.len() as u64 != (limit - 1) * 4 {
        return Err(bad("body length does not match limit"));
    }
    let table = body.chunks_exact(4).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])).collect();
    SpfSieve::from_table(limit, table)
}

pub fn save_spf_cache(sieve: &SpfSieve, path: &Path) -> Result<()> {
    write_spf_cache(sieve, BufWriter::new(File::create(path)?))
}

pub fn load_spf_cache(path: &Path) -> Result<SpfSieve> {
    read_spf_cache(BufReader::new(File::open(path)?))
}
