//! Block scaling: per-PRB values divided by one shared unsigned scaler.
//!
//! The scaler lives on the grid `code × step`, `code ∈ [1, 2^scaler_bits - 1]`.
//! `step` is the smallest power of two (at least 1) for which the largest
//! possible 16-bit block still fits the code range, so it is a function of
//! the configuration alone and never travels with the block. The code is
//! rounded up so no scaled value overflows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iq_core::PrbBlock;

use super::bits::{push_signed, BitCursor, Bits};
use super::block::{block_from_values, BlockMethod, CompressedPrb, COMPONENTS_PER_PRB};

const FULL_SCALE: u64 = 32768;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlockScalingConfig {
    pub value_bits: u32,
    pub scaler_bits: u32,
}

impl Default for BlockScalingConfig {
    fn default() -> Self {
        Self {
            value_bits: 9,
            scaler_bits: 8,
        }
    }
}

impl BlockScalingConfig {
    pub fn new(value_bits: u32, scaler_bits: u32) -> Result<Self> {
        let cfg = Self {
            value_bits,
            scaler_bits,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=16).contains(&self.value_bits) {
            return Err(Error::invalid(format!(
                "block scaling value width must be 2..=16 bits, got {}",
                self.value_bits
            )));
        }
        if !(1..=16).contains(&self.scaler_bits) {
            return Err(Error::invalid(format!(
                "block scaling scaler width must be 1..=16 bits, got {}",
                self.scaler_bits
            )));
        }
        Ok(())
    }

    /// Largest scaled magnitude, `2^(value_bits-1) - 1`.
    pub fn max_value(&self) -> u64 {
        (1u64 << (self.value_bits - 1)) - 1
    }

    pub fn max_code(&self) -> u64 {
        (1u64 << self.scaler_bits) - 1
    }

    /// Scaler grid step (power of two, ≥ 1).
    pub fn grid_step(&self) -> u64 {
        let vmax = self.max_value();
        let mut step = 1u64;
        while FULL_SCALE.div_ceil(vmax * step) > self.max_code() {
            step <<= 1;
        }
        step
    }

    /// Scaler code for a block whose largest magnitude is `peak`.
    pub fn scaler_code(&self, peak: u64) -> u64 {
        peak.div_ceil(self.max_value() * self.grid_step()).max(1)
    }
}

// round(num / den), halves away from zero.
fn div_round(num: i64, den: i64) -> i64 {
    let q = (2 * num.abs() + den) / (2 * den);
    if num < 0 {
        -q
    } else {
        q
    }
}

pub fn block_scaling_compress(block: &PrbBlock, cfg: &BlockScalingConfig) -> Result<CompressedPrb> {
    cfg.validate()?;
    let peak = u64::from(block.max_magnitude());
    let code = cfg.scaler_code(peak);
    let scaler = (code * cfg.grid_step()) as i64;
    let vmax = cfg.max_value() as i64;
    let mut payload = Bits::with_capacity(COMPONENTS_PER_PRB * cfg.value_bits as usize);
    for c in block.components() {
        let x = i64::from(c);
        let mut v = div_round(x, scaler);
        // A peak that rounds down far enough would make the reconstructed
        // block select a smaller scaler; keep it at the ceiling instead.
        if x.unsigned_abs() == peak && code > 1 && v.unsigned_abs() * code <= cfg.max_value() * (code - 1) {
            let up = (x.abs() + scaler - 1) / scaler;
            v = if x < 0 { -up } else { up };
        }
        debug_assert!(v.abs() <= vmax);
        push_signed(&mut payload, v as i32, cfg.value_bits);
    }
    CompressedPrb::new(
        BlockMethod::BlockScaling,
        cfg.value_bits,
        cfg.scaler_bits,
        code as u32,
        payload,
    )
}

pub fn block_scaling_decompress(c: &CompressedPrb, cfg: &BlockScalingConfig) -> Result<PrbBlock> {
    c.expect_method(BlockMethod::BlockScaling)?;
    c.expect_layout(cfg.value_bits, cfg.scaler_bits)?;
    let code = u64::from(c.shared_param());
    if code == 0 {
        return Err(Error::CorruptBlock("block scaling code 0 is not a valid scaler".into()));
    }
    let scaler = (code * cfg.grid_step()) as i64;
    let mut cur = BitCursor::new(c.payload());
    let values: Vec<i64> = (0..COMPONENTS_PER_PRB)
        .map(|_| i64::from(cur.read_signed(cfg.value_bits).expect("payload length checked")) * scaler)
        .collect();
    Ok(block_from_values(values))
}

/// Scaler for floating-point blocks (beamspace coefficients):
/// `code × 2^exponent` with `code` normalized to `scaler_bits` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FloatScaler {
    pub code: u32,
    pub exponent: i8,
}

/// Bits carried by a [`FloatScaler`] on the wire besides the code.
pub const FLOAT_SCALER_EXPONENT_BITS: u32 = 8;

impl FloatScaler {
    pub fn value(self) -> f64 {
        f64::from(self.code) * 2f64.powi(i32::from(self.exponent))
    }

    /// Smallest grid value ≥ `raw`.
    pub fn covering(raw: f64, scaler_bits: u32) -> Result<Self> {
        if !(raw > 0.0) || !raw.is_finite() {
            return Ok(Self {
                code: 1,
                exponent: i8::MIN,
            });
        }
        let mut exponent = raw.log2().ceil() as i32 - scaler_bits as i32;
        let mut code = (raw / 2f64.powi(exponent)).ceil() as u64;
        if code >= 1 << scaler_bits {
            code = code.div_ceil(2);
            exponent += 1;
        }
        while (code as f64) * 2f64.powi(exponent) < raw {
            code += 1;
        }
        let exponent = i8::try_from(exponent)
            .map_err(|_| Error::Range(format!("scaler {raw} outside the representable exponent range")))?;
        Ok(Self {
            code: code as u32,
            exponent,
        })
    }
}

/// Quantizes real components with a shared scaler covering the peak.
pub fn quantize_real_block(components: &[f64], cfg: &BlockScalingConfig) -> Result<(FloatScaler, Vec<i32>)> {
    cfg.validate()?;
    let vmax = cfg.max_value() as f64;
    let peak = components.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let scaler = FloatScaler::covering(peak / vmax, cfg.scaler_bits)?;
    let s = scaler.value();
    let values = components
        .iter()
        .map(|&c| (c / s).round().clamp(-vmax, vmax) as i32)
        .collect();
    Ok((scaler, values))
}

pub fn dequantize_real_block(scaler: FloatScaler, values: &[i32]) -> Vec<f64> {
    let s = scaler.value();
    values.iter().map(|&v| f64::from(v) * s).collect()
}
