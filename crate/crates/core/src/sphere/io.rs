//! Binary field dumps.
//!
//! Layout (all little-endian):
//!
//! ```text
//! u32 trunc | u32 nlat | u32 nlon | payload
//! ```
//!
//! A spectral payload is one or more fields, each `num_coeffs(trunc)` complex
//! values stored as `(re: f64, im: f64)` in m-major order (for each m, degrees
//! l = m..=T). A grid payload is `nlat * nlon` f64 values, row-major with
//! latitudes south to north.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use super::config::{num_coeffs, SphereConfig};
use super::field::{GridField, SpectralField, ValueKind};
use crate::error::{Error, Result};

const HEADER_LEN: usize = 12;

fn header(cfg: &SphereConfig) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN);
    for v in [cfg.trunc, cfg.nlat, cfg.nlon] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out
}

/// Parsed `(trunc, nlat, nlon)` header and the payload bytes.
pub fn read_header(bytes: &[u8]) -> Result<((usize, usize, usize), &[u8])> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::data("field dump shorter than its header"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[4 * i..4 * i + 4].try_into().unwrap()) as usize;
    Ok(((word(0), word(1), word(2)), &bytes[HEADER_LEN..]))
}

pub fn encode_spectral(cfg: &SphereConfig, fields: &[&SpectralField]) -> Result<Vec<u8>> {
    let mut out = header(cfg);
    for f in fields {
        if f.trunc() != cfg.trunc || f.kind() != ValueKind::RealOrigin {
            return Err(Error::config("only real-origin fields at the header truncation can be dumped"));
        }
        for c in f.coeffs() {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_spectral(bytes: &[u8], cfg: &SphereConfig, count: usize) -> Result<Vec<SpectralField>> {
    let ((trunc, nlat, nlon), payload) = read_header(bytes)?;
    if (trunc, nlat, nlon) != (cfg.trunc, cfg.nlat, cfg.nlon) {
        return Err(Error::config(format!(
            "dump header T{trunc} {nlat}x{nlon} does not match T{} {}x{}",
            cfg.trunc, cfg.nlat, cfg.nlon
        )));
    }
    let n = num_coeffs(trunc);
    if payload.len() != count * n * 16 {
        return Err(Error::data(format!(
            "expected {} payload bytes, found {}",
            count * n * 16,
            payload.len()
        )));
    }
    let mut values = payload
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()));
    let mut fields = Vec::with_capacity(count);
    for _ in 0..count {
        let coeffs: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(values.next().unwrap(), values.next().unwrap()))
            .collect();
        fields.push(SpectralField::from_coeffs(trunc, ValueKind::RealOrigin, coeffs)?);
    }
    Ok(fields)
}

pub fn encode_grid(cfg: &SphereConfig, grid: &GridField) -> Result<Vec<u8>> {
    if grid.nlat() != cfg.nlat || grid.nlon() != cfg.nlon {
        return Err(Error::config("grid shape does not match header"));
    }
    let mut out = header(cfg);
    for v in grid.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    Ok(out)
}

pub fn decode_grid(bytes: &[u8]) -> Result<((usize, usize, usize), GridField)> {
    let (hdr, payload) = read_header(bytes)?;
    let (_, nlat, nlon) = hdr;
    if payload.len() != nlat * nlon * 8 {
        return Err(Error::data("grid payload length does not match header"));
    }
    let values = payload
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
        .collect();
    Ok((hdr, GridField::from_values(nlat, nlon, values)?))
}

pub fn write_spectral(path: &Path, cfg: &SphereConfig, fields: &[&SpectralField]) -> Result<()> {
    let bytes = encode_spectral(cfg, fields)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_spectral(path: &Path, cfg: &SphereConfig, count: usize) -> Result<Vec<SpectralField>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_spectral(&bytes, cfg, count)
}
