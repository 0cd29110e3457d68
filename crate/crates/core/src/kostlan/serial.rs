//! Section records: one JSON object per line as text, or a little-endian binary layout.
//!
//! Binary layout (all integers `u32` LE, floats `f64` LE):
//! magic `RCIS`, version, ordering-tag length and bytes, factor count and factors,
//! bundle count, then per bundle: multidegree entries, power, coefficient count, coefficients.

use std::io::{Read, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::ambient::{AmbientSpace, BundleSystem, Powers};
use crate::error::{Error, Result};

use super::basis::{BasisSet, BASIS_ORDERING};
use super::section::SectionSystem;

const MAGIC: &[u8; 4] = b"RCIS";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionRecord {
    pub ambient: Vec<usize>,
    pub multidegrees: Vec<Vec<usize>>,
    pub powers: Vec<usize>,
    pub ordering: String,
    pub coeffs: Vec<Vec<f64>>,
}

impl SectionRecord {
    pub fn from_section(s: &SectionSystem) -> Result<Self> {
        Ok(Self {
            ambient: s.ambient().factors().to_vec(),
            multidegrees: s.bundles().multidegrees().to_vec(),
            powers: s.bundles().numeric_powers()?.to_vec(),
            ordering: BASIS_ORDERING.to_string(),
            coeffs: s.coeffs().to_vec(),
        })
    }

    pub fn to_section(&self) -> Result<SectionSystem> {
        if self.ordering != BASIS_ORDERING {
            return Err(Error::InvalidRecord(format!("unknown basis ordering {:?}", self.ordering)));
        }
        let x = AmbientSpace::new(self.ambient.clone())?;
        let b = BundleSystem::new(&x, self.multidegrees.clone(), Powers::Numeric(self.powers.clone()))?;
        let space = Arc::new(BasisSet::new(&x, &b)?);
        SectionSystem::new(space, self.coeffs.clone()).map_err(|e| Error::InvalidRecord(e.to_string()))
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::InvalidRecord(e.to_string()))
    }

    pub fn write_binary<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let u = |w: &mut W, v: usize| w.write_all(&(v as u32).to_le_bytes());
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        u(w, self.ordering.len())?;
        w.write_all(self.ordering.as_bytes())?;
        u(w, self.ambient.len())?;
        for &n in &self.ambient {
            u(w, n)?;
        }
        u(w, self.coeffs.len())?;
        for (i, c) in self.coeffs.iter().enumerate() {
            for &a in &self.multidegrees[i] {
                u(w, a)?;
            }
            u(w, self.powers[i])?;
            u(w, c.len())?;
            for v in c {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Reads one record; `Ok(None)` at a clean end of stream.
    pub fn read_binary<R: Read>(r: &mut R) -> Result<Option<Self>> {
        let mut magic = [0u8; 4];
        match r.read(&mut magic[..1]) {
            Ok(0) => return Ok(None),
            Ok(_) => {}
            Err(e) => return Err(Error::InvalidRecord(e.to_string())),
        }
        r.read_exact(&mut magic[1..]).map_err(io_err)?;
        if &magic != MAGIC {
            return Err(Error::InvalidRecord("bad magic".into()));
        }
        if read_u32(r)? != VERSION as usize {
            return Err(Error::InvalidRecord("unsupported version".into()));
        }
        let len = read_u32(r)?;
        let mut tag = vec![0u8; len];
        r.read_exact(&mut tag).map_err(io_err)?;
        let ordering = String::from_utf8(tag).map_err(|e| Error::InvalidRecord(e.to_string()))?;
        let k = read_u32(r)?;
        let ambient = (0..k).map(|_| read_u32(r)).collect::<Result<Vec<_>>>()?;
        let m = read_u32(r)?;
        let (mut multidegrees, mut powers, mut coeffs) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..m {
            multidegrees.push((0..k).map(|_| read_u32(r)).collect::<Result<Vec<_>>>()?);
            powers.push(read_u32(r)?);
            let len = read_u32(r)?;
            let mut c = Vec::with_capacity(len);
            for _ in 0..len {
                let mut b = [0u8; 8];
                r.read_exact(&mut b).map_err(io_err)?;
                c.push(f64::from_le_bytes(b));
            }
            coeffs.push(c);
        }
        Ok(Some(Self { ambient, multidegrees, powers, ordering, coeffs }))
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidRecord(e.to_string())
}

fn read_u32<R: Read>(r: &mut R) -> Result<usize> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(io_err)?;
    Ok(u32::from_le_bytes(b) as usize)
}

/// Parses text records, one per nonempty line.
pub fn read_text_records(text: &str) -> Result<Vec<SectionRecord>> {
    text.lines().filter(|l| !l.trim().is_empty()).map(SectionRecord::from_json_line).collect()
}

pub fn read_binary_records(bytes: &[u8]) -> Result<Vec<SectionRecord>> {
    let mut cur = std::io::Cursor::new(bytes);
    let mut out = Vec::new();
    while let Some(rec) = SectionRecord::read_binary(&mut cur)? {
        out.push(rec);
    }
    Ok(out)
}

/// Reads either format, detected by the binary magic.
pub fn read_records(bytes: &[u8]) -> Result<Vec<SectionRecord>> {
    if bytes.starts_with(MAGIC) {
        read_binary_records(bytes)
    } else {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::InvalidRecord(e.to_string()))?;
        read_text_records(text)
    }
}
