use crate::error::{Error, Result};
use crate::iq_core::{PrbBlock, SUBCARRIERS_PER_PRB};

use super::bits::{push_unsigned, BitCursor, Bits, BitsSlice};

/// Components carried by one PRB (12 samples × I/Q).
pub const COMPONENTS_PER_PRB: usize = 2 * SUBCARRIERS_PER_PRB;

/// The per-PRB block compression methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockMethod {
    Bfp,
    BlockScaling,
    MuLaw,
}

impl std::fmt::Display for BlockMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BlockMethod::Bfp => "block floating point",
            BlockMethod::BlockScaling => "block scaling",
            BlockMethod::MuLaw => "mu-law",
        })
    }
}

/// One compressed PRB: a shared parameter (exponent, scaler code or shift)
/// followed by 24 packed values, I before Q, MSB first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompressedPrb {
    method: BlockMethod,
    value_bits: u32,
    param_bits: u32,
    shared_param: u32,
    payload: Bits,
}

impl CompressedPrb {
    pub(crate) fn new(
        method: BlockMethod,
        value_bits: u32,
        param_bits: u32,
        shared_param: u32,
        payload: Bits,
    ) -> Result<Self> {
        if payload.len() != COMPONENTS_PER_PRB * value_bits as usize {
            return Err(Error::CorruptBlock(format!(
                "payload holds {} bits, expected {}",
                payload.len(),
                COMPONENTS_PER_PRB * value_bits as usize
            )));
        }
        if param_bits < 32 && shared_param >> param_bits != 0 {
            return Err(Error::Range(format!(
                "shared parameter {shared_param} does not fit in {param_bits} bits"
            )));
        }
        Ok(Self {
            method,
            value_bits,
            param_bits,
            shared_param,
            payload,
        })
    }

    pub fn method(&self) -> BlockMethod {
        self.method
    }

    pub fn value_bits(&self) -> u32 {
        self.value_bits
    }

    pub fn param_bits(&self) -> u32 {
        self.param_bits
    }

    /// Exponent (BFP), scaler code (block scaling) or shift (μ-law).
    pub fn shared_param(&self) -> u32 {
        self.shared_param
    }

    pub fn payload(&self) -> &BitsSlice {
        &self.payload
    }

    /// Bits on the wire: shared parameter plus payload.
    pub fn bit_len(&self) -> usize {
        self.param_bits as usize + self.payload.len()
    }

    /// Serialized form: shared parameter first, then the payload.
    pub fn to_bits(&self) -> Bits {
        let mut out = Bits::with_capacity(self.bit_len());
        push_unsigned(&mut out, self.shared_param, self.param_bits);
        out.extend_from_bitslice(&self.payload);
        out
    }

    pub fn from_bits(method: BlockMethod, value_bits: u32, param_bits: u32, bits: &BitsSlice) -> Result<Self> {
        let mut cur = BitCursor::new(bits);
        let param = cur
            .read_unsigned(param_bits)
            .ok_or_else(|| Error::CorruptBlock("truncated shared parameter".into()))?;
        let payload: Bits = bits[cur.position()..].to_bitvec();
        Self::new(method, value_bits, param_bits, param, payload)
    }

    pub(crate) fn expect_method(&self, method: BlockMethod) -> Result<()> {
        if self.method != method {
            return Err(Error::invalid(format!(
                "expected a {method} block, got {}",
                self.method
            )));
        }
        Ok(())
    }

    pub(crate) fn expect_layout(&self, value_bits: u32, param_bits: u32) -> Result<()> {
        if self.value_bits != value_bits || self.param_bits != param_bits {
            return Err(Error::invalid(format!(
                "block layout {}/{} does not match configuration {value_bits}/{param_bits}",
                self.value_bits, self.param_bits
            )));
        }
        Ok(())
    }
}

pub(crate) fn clamp_i16(v: i64) -> i16 {
    v.clamp(i64::from(i16::MIN), i64::from(i16::MAX)) as i16
}

pub(crate) fn block_from_values(values: impl IntoIterator<Item = i64>) -> PrbBlock {
    let mut comps = [0i16; COMPONENTS_PER_PRB];
    for (c, v) in comps.iter_mut().zip(values) {
        *c = clamp_i16(v);
    }
    PrbBlock::from_components(&comps)
}
