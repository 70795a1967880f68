//! On-disk tensor cache.
//!
//! Little-endian layout: magic `B6T1`, `N: u32`, `P: f64`, entry count `u64`,
//! checksum `u64`, then one 28-byte record per entry (six `i16` indices, `f64`
//! value, `f64` error). The checksum is the first eight bytes of the SHA-256
//! digest of the record block, read as a little-endian `u64`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::tensor::BesselTensor;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"B6T1";
const HEADER_LEN: usize = 32;
const RECORD_LEN: usize = 28;

pub(crate) fn encode_records(t: &BesselTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(t.len() * RECORD_LEN);
    for (idx, (v, e)) in t.entries() {
        for i in idx {
            out.extend_from_slice(&i.to_le_bytes());
        }
        out.extend_from_slice(&v.to_le_bytes());
        out.extend_from_slice(&e.to_le_bytes());
    }
    out
}

pub(crate) fn records_checksum(records: &[u8]) -> u64 {
    let digest = Sha256::digest(records);
    u64::from_le_bytes(digest[..8].try_into().expect("eight bytes"))
}

/// Serialize a tensor to bytes.
pub fn to_bytes(t: &BesselTensor) -> Vec<u8> {
    let records = encode_records(t);
    let mut out = Vec::with_capacity(HEADER_LEN + records.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(t.n as u32).to_le_bytes());
    out.extend_from_slice(&t.cutoff.to_le_bytes());
    out.extend_from_slice(&(t.len() as u64).to_le_bytes());
    out.extend_from_slice(&records_checksum(&records).to_le_bytes());
    out.extend_from_slice(&records);
    out
}

/// Parse bytes written by [`to_bytes`], verifying the checksum.
pub fn from_bytes(bytes: &[u8]) -> Result<BesselTensor> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Corrupt(format!(
            "file holds {} bytes, shorter than the {HEADER_LEN}-byte header",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Corrupt("bad magic".into()));
    }
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let n = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let cutoff = f64::from_bits(u64_at(8));
    let count = u64_at(16) as usize;
    let stored = u64_at(24);
    let records = &bytes[HEADER_LEN..];
    let computed = records_checksum(records);
    if computed != stored {
        return Err(Error::Checksum { stored, computed });
    }
    if records.len() != count * RECORD_LEN {
        return Err(Error::Corrupt(format!(
            "expected {count} records, found {} bytes",
            records.len()
        )));
    }
    let mut entries = BTreeMap::new();
    for rec in records.chunks_exact(RECORD_LEN) {
        let mut idx = [0i16; 6];
        for (i, v) in idx.iter_mut().enumerate() {
            *v = i16::from_le_bytes([rec[2 * i], rec[2 * i + 1]]);
        }
        let v = f64::from_le_bytes(rec[12..20].try_into().unwrap());
        let e = f64::from_le_bytes(rec[20..28].try_into().unwrap());
        entries.insert(idx, (v, e));
    }
    Ok(BesselTensor::from_entries(n, cutoff, entries))
}

pub fn write_cache(t: &BesselTensor, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&to_bytes(t))?;
    f.sync_all()?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<BesselTensor> {
    from_bytes(&fs::read(path)?)
}

/// Write then read back, failing unless the entries survive bit for bit.
pub fn cache_roundtrip(t: &BesselTensor, path: &Path) -> Result<BesselTensor> {
    write_cache(t, path)?;
    let back = read_cache(path)?;
    let same = back.len() == t.len()
        && back.n == t.n
        && back.cutoff.to_bits() == t.cutoff.to_bits()
        && back.entries().zip(t.entries()).all(|((ka, va), (kb, vb))| {
            ka == kb && va.0.to_bits() == vb.0.to_bits() && va.1.to_bits() == vb.1.to_bits()
        });
    if !same {
        return Err(Error::Corrupt("round trip changed the tensor".into()));
    }
    Ok(back)
}

/// CSV mirror of the cache: header line then `n1,…,n6,value,error` with 17
/// significant digits.
pub fn to_csv(t: &BesselTensor) -> String {
    let mut s = format!("# N={} P={:.17e}\nn1,n2,n3,n4,n5,n6,value,error\n", t.n, t.cutoff);
    for (idx, (v, e)) in t.entries() {
        s.push_str(&format!(
            "{},{},{},{},{},{},{:.16e},{:.16e}\n",
            idx[0], idx[1], idx[2], idx[3], idx[4], idx[5], v, e
        ));
    }
    s
}

pub fn from_csv(text: &str) -> Result<BesselTensor> {
    let mut lines = text.lines();
    let meta = lines
        .next()
        .ok_or_else(|| Error::Corrupt("empty CSV".into()))?;
    let mut n = None;
    let mut cutoff = None;
    for part in meta.trim_start_matches('#').split_whitespace() {
        if let Some(v) = part.strip_prefix("N=") {
            n = v.parse::<usize>().ok();
        } else if let Some(v) = part.strip_prefix("P=") {
            cutoff = v.parse::<f64>().ok();
        }
    }
    let (n, cutoff) = match (n, cutoff) {
        (Some(n), Some(p)) => (n, p),
        _ => return Err(Error::Corrupt(format!("bad CSV metadata line: {meta}"))),
    };
    lines.next();
    let mut entries = BTreeMap::new();
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(Error::Corrupt(format!("bad CSV row: {line}")));
        }
        let bad = |_| Error::Corrupt(format!("bad CSV row: {line}"));
        let mut idx = [0i16; 6];
        for (i, v) in idx.iter_mut().enumerate() {
            *v = cols[i].trim().parse().map_err(|_| Error::Corrupt(format!("bad CSV row: {line}")))?;
        }
        let v: f64 = cols[6].trim().parse().map_err(bad)?;
        let e: f64 = cols[7].trim().parse().map_err(bad)?;
        entries.insert(idx, (v, e));
    }
    Ok(BesselTensor::from_entries(n, cutoff, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::{build_tensor, RadialGrid};

    #[test]
    fn truncated_bytes_fail_checksum() {
        let t = build_tensor(1, &RadialGrid::new(200.0, true)).unwrap();
        let bytes = to_bytes(&t);
        let back = from_bytes(&bytes).unwrap();
        assert_eq!(back.len(), t.len());
        let cut = &bytes[..bytes.len() - 5];
        assert!(matches!(from_bytes(cut), Err(Error::Checksum { .. })));
        assert!(matches!(from_bytes(&bytes[..10]), Err(Error::Corrupt(_))));
    }

    #[test]
    fn csv_round_trip() {
        let t = build_tensor(1, &RadialGrid::new(200.0, true)).unwrap();
        let back = from_csv(&to_csv(&t)).unwrap();
        for ((ka, va), (kb, vb)) in back.entries().zip(t.entries()) {
            assert_eq!(ka, kb);
            assert!((va.0 - vb.0).abs() <= 1e-15 * vb.0.abs().max(1e-300));
        }
    }
}
