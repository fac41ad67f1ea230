//! Raw IQ file format: little-endian interleaved `i16`, I then Q, no header.

use crate::error::{Error, Result};

use super::sample::IqSample;

pub const BYTES_PER_SAMPLE: usize = 4;

pub fn read_iq_samples(bytes: &[u8]) -> Result<Vec<IqSample>> {
    let whole = bytes.len() - bytes.len() % BYTES_PER_SAMPLE;
    if whole != bytes.len() {
        return Err(Error::parse(
            whole,
            format!(
                "trailing {} byte(s); IQ files hold whole 4-byte samples",
                bytes.len() - whole
            ),
        ));
    }
    Ok(bytes
        .chunks_exact(BYTES_PER_SAMPLE)
        .map(|c| IqSample::new(i16::from_le_bytes([c[0], c[1]]), i16::from_le_bytes([c[2], c[3]])))
        .collect())
}

pub fn write_iq_samples(samples: &[IqSample]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * BYTES_PER_SAMPLE);
    for s in samples {
        out.extend_from_slice(&s.i.to_le_bytes());
        out.extend_from_slice(&s.q.to_le_bytes());
    }
    out
}
