//! Binary catalog files: `"QCAN"`, version, t_max, buckets, CRC-64 trailer.

use std::fs;
use std::path::Path;

use crc::{Crc, CRC_64_XZ};

use super::{rebuild_bucket, Catalog, CatalogEntry, MAX_BLOCKS};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"QCAN";
pub const FORMAT_VERSION: u32 = 1;

const CRC64: Crc<u64> = Crc::<u64>::new(&CRC_64_XZ);
const HEADER: usize = 12;

pub fn save_bytes(cat: &Catalog) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + cat.len() * 40 + cat.buckets.len() * 16 + 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&cat.max_tcount.to_le_bytes());
    for b in &cat.buckets {
        out.extend_from_slice(&b.key.to_le_bytes());
        out.extend_from_slice(&(b.entries.len() as u64).to_le_bytes());
        for e in &b.entries {
            out.push(e.t_count);
            let nbytes = (e.t_count as usize).div_ceil(8);
            out.extend_from_slice(&e.bits.to_le_bytes()[..nbytes]);
            out.extend_from_slice(&e.trace_key.to_le_bytes());
            for c in e.axis {
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
    }
    let crc = CRC64.checksum(&out);
    out.extend_from_slice(&crc.to_le_bytes());
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or_else(|| {
            Error::Format(format!("truncated at byte {} (wanted {n} more)", self.pos))
        })?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn load_bytes(data: &[u8]) -> Result<Catalog> {
    if data.len() < HEADER + 8 {
        return Err(Error::Format(format!("file too short ({} bytes)", data.len())));
    }
    if &data[..4] != MAGIC {
        return Err(Error::Format("bad magic bytes".into()));
    }
    let (body, trailer) = data.split_at(data.len() - 8);
    let mut r = Reader { buf: body, pos: 4 };
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Version { found: version, expected: FORMAT_VERSION });
    }
    let stored = u64::from_le_bytes(trailer.try_into().expect("8 bytes"));
    let computed = CRC64.checksum(body);
    if stored != computed {
        return Err(Error::Checksum { stored, computed });
    }
    let max_tcount = r.u32()?;
    if max_tcount > MAX_BLOCKS {
        return Err(Error::Format(format!("t_max {max_tcount} exceeds {MAX_BLOCKS}")));
    }
    let mut buckets = Vec::new();
    let mut prev_key = f64::NEG_INFINITY;
    while r.pos < body.len() {
        let key = r.f64()?;
        if key.is_nan() || key <= prev_key {
            return Err(Error::Format(format!("bucket keys not increasing at {key}")));
        }
        prev_key = key;
        let count = r.u64()?;
        if count == 0 || count > (body.len() - r.pos) as u64 / 33 {
            return Err(Error::Format(format!("implausible bucket size {count}")));
        }
        let mut entries = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let t_count = r.u8()?;
            if t_count as u32 > max_tcount {
                return Err(Error::Format(format!("entry T-count {t_count} above t_max {max_tcount}")));
            }
            let raw = r.take((t_count as usize).div_ceil(8))?;
            let mut le = [0u8; 8];
            le[..raw.len()].copy_from_slice(raw);
            let bits = u64::from_le_bytes(le);
            if t_count < 64 && bits >> t_count != 0 {
                return Err(Error::Format("padding bits set".into()));
            }
            if bits & 0xf != 0 {
                return Err(Error::Format("non-canonical body".into()));
            }
            let trace_key = r.f64()?;
            let axis = [r.f64()?, r.f64()?, r.f64()?];
            entries.push(CatalogEntry { bits, t_count, trace_key, axis });
        }
        buckets.push(rebuild_bucket(key, entries));
    }
    Ok(Catalog { max_tcount, version, buckets })
}

pub fn save(cat: &Catalog, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, save_bytes(cat))?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Catalog> {
    load_bytes(&fs::read(path)?)
}
