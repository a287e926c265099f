//! Optional on-disk segment cache.
//!
//! One binary file per segment: magic `PSPL1`, then `lo` and `hi` as
//! 8-byte little-endian unsigned integers, then the primality bitmap
//! (exactly `ceil((hi - lo) / 8)` bytes, LSB-first). The cache is a pure
//! optimization: a miss or a stale file falls back to sieving, and
//! results are identical with the cache disabled.

use super::PrimeSegment;
use crate::error::Result;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

const MAGIC: &[u8; 5] = b"PSPL1";

pub struct SegmentCache {
    dir: PathBuf,
}

impl SegmentCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref())?;
        Ok(SegmentCache {
            dir: dir.as_ref().to_path_buf(),
        })
    }

    fn path_for(&self, lo: u64, hi: u64) -> PathBuf {
        self.dir.join(format!("seg-{lo}-{hi}.pspl"))
    }

    /// Look up a cached segment; any mismatch is treated as a miss.
    pub fn load(&self, lo: u64, hi: u64) -> Result<Option<PrimeSegment>> {
        let path = self.path_for(lo, hi);
        let mut file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(_) => return Ok(None),
        };
        let mut buf = Vec::new();
        if file.read_to_end(&mut buf).is_err() {
            return Ok(None);
        }
        let bitmap_len = ((hi - lo).div_ceil(8)) as usize;
        if buf.len() != 5 + 16 + bitmap_len || &buf[..5] != MAGIC {
            return Ok(None);
        }
        let rd_lo = u64::from_le_bytes(buf[5..13].try_into().unwrap());
        let rd_hi = u64::from_le_bytes(buf[13..21].try_into().unwrap());
        if rd_lo != lo || rd_hi != hi {
            return Ok(None);
        }
        let mut words = vec![0u64; bitmap_len.div_ceil(8)];
        for (i, byte) in buf[21..].iter().enumerate() {
            words[i / 8] |= (*byte as u64) << (8 * (i % 8));
        }
        Ok(Some(PrimeSegment::from_parts(lo, hi, words)))
    }

    pub fn store(&self, segment: &PrimeSegment) -> Result<()> {
        let lo = segment.lo();
        let hi = segment.hi();
        let bitmap_len = ((hi - lo).div_ceil(8)) as usize;
        let mut buf = Vec::with_capacity(5 + 16 + bitmap_len);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&lo.to_le_bytes());
        buf.extend_from_slice(&hi.to_le_bytes());
        let mut bytes = Vec::with_capacity(segment.flag_words().len() * 8);
        for w in segment.flag_words() {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        bytes.truncate(bitmap_len);
        buf.extend_from_slice(&bytes);
        let tmp = self.path_for(lo, hi).with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&buf)?;
        }
        fs::rename(&tmp, self.path_for(lo, hi))?;
        Ok(())
    }
}
