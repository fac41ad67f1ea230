use crate::error::{Error, Result};

use super::numerology::SUBCARRIERS_PER_PRB;

/// Bits occupied by one uncompressed complex sample (16-bit I + 16-bit Q).
pub const UNCOMPRESSED_SAMPLE_BITS: u32 = 32;

/// One frequency-domain resource element in 16-bit fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IqSample {
    pub i: i16,
    pub q: i16,
}

impl IqSample {
    pub const fn new(i: i16, q: i16) -> Self {
        Self { i, q }
    }

    pub const ZERO: IqSample = IqSample { i: 0, q: 0 };

    /// Both components, I first.
    pub fn components(self) -> [i16; 2] {
        [self.i, self.q]
    }
}

/// The twelve resource elements of one PRB. All block codecs work on this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PrbBlock {
    samples: [IqSample; SUBCARRIERS_PER_PRB],
}

impl PrbBlock {
    pub const fn new(samples: [IqSample; SUBCARRIERS_PER_PRB]) -> Self {
        Self { samples }
    }

    pub fn zeros() -> Self {
        Self::default()
    }

    pub fn from_slice(samples: &[IqSample]) -> Result<Self> {
        let samples: [IqSample; SUBCARRIERS_PER_PRB] = samples.try_into().map_err(|_| {
            Error::invalid(format!(
                "a PRB holds exactly {SUBCARRIERS_PER_PRB} samples, got {}",
                samples.len()
            ))
        })?;
        Ok(Self { samples })
    }

    /// Builds a block from 24 interleaved components (I0, Q0, I1, Q1, ...).
    pub fn from_components(components: &[i16; 2 * SUBCARRIERS_PER_PRB]) -> Self {
        let mut samples = [IqSample::ZERO; SUBCARRIERS_PER_PRB];
        for (s, pair) in samples.iter_mut().zip(components.chunks_exact(2)) {
            *s = IqSample::new(pair[0], pair[1]);
        }
        Self { samples }
    }

    pub fn samples(&self) -> &[IqSample; SUBCARRIERS_PER_PRB] {
        &self.samples
    }

    /// Interleaved components, I before Q for each sample.
    pub fn components(&self) -> [i16; 2 * SUBCARRIERS_PER_PRB] {
        let mut out = [0i16; 2 * SUBCARRIERS_PER_PRB];
        for (pair, s) in out.chunks_exact_mut(2).zip(self.samples.iter()) {
            pair[0] = s.i;
            pair[1] = s.q;
        }
        out
    }

    /// Largest component magnitude in the block (up to 32768).
    pub fn max_magnitude(&self) -> u32 {
        self.components()
            .iter()
            .map(|c| c.unsigned_abs() as u32)
            .max()
            .unwrap_or(0)
    }
}
