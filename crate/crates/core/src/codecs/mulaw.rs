//! μ-law block compression.
//!
//! Each component is arithmetically shifted right by `shift_bits`, then its
//! magnitude is companded to `value_bits - 1` bits and stored with a sign bit
//! (sign-magnitude, MSB first). The shift travels in the block's shared
//! parameter field. Two compander curves are available:
//!
//! * [`MuLawCurve::Segmented`] (default): the 8-segment piecewise-linear
//!   approximation with segment boundaries at powers of two, as in G.711.
//!   A code is `sss mmmm…`: three segment bits and `value_bits - 4`
//!   mantissa bits. Segment 0 and 1 share the finest step.
//! * [`MuLawCurve::Continuous`]: `y = ln(1 + μ|x|/X) / ln(1 + μ)` quantized
//!   uniformly in `y`.
//!
//! Decoding maps each code to the integer nearest the middle of its decision
//! interval (code 0 maps to exactly 0), so re-encoding a decoded block gives
//! the same codes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iq_core::PrbBlock;

use super::bits::{push_unsigned, BitCursor, Bits};
use super::block::{block_from_values, BlockMethod, CompressedPrb, COMPONENTS_PER_PRB};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuLawCurve {
    #[default]
    Segmented,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MuLawConfig {
    pub value_bits: u32,
    pub mu: f64,
    pub shift_bits: u32,
    /// Width of the shared field that carries the shift.
    pub param_bits: u32,
    pub curve: MuLawCurve,
}

impl Default for MuLawConfig {
    fn default() -> Self {
        Self {
            value_bits: 9,
            mu: 255.0,
            shift_bits: 0,
            param_bits: 8,
            curve: MuLawCurve::Segmented,
        }
    }
}

impl MuLawConfig {
    pub fn validate(&self) -> Result<()> {
        if !(4..=12).contains(&self.value_bits) {
            return Err(Error::invalid(format!(
                "mu-law value width must be 4..=12 bits, got {}",
                self.value_bits
            )));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::invalid(format!("mu must be positive, got {}", self.mu)));
        }
        if !(1..=8).contains(&self.param_bits) || self.shift_bits >> self.param_bits != 0 {
            return Err(Error::invalid(format!(
                "shift {} does not fit a {}-bit parameter field",
                self.shift_bits, self.param_bits
            )));
        }
        if self.curve == MuLawCurve::Segmented && self.shift_bits + self.mantissa_bits() > 8 {
            return Err(Error::invalid(format!(
                "segmented mu-law with {} value bits allows a shift of at most {}",
                self.value_bits,
                8 - self.mantissa_bits()
            )));
        }
        if self.shift_bits > 14 {
            return Err(Error::invalid("shift must leave at least one magnitude bit"));
        }
        Ok(())
    }

    fn mantissa_bits(&self) -> u32 {
        self.value_bits - 4
    }

    fn magnitude_levels(&self) -> u32 {
        1 << (self.value_bits - 1)
    }
}

/// A μ-law compander for one configuration, with its decode table.
#[derive(Debug, Clone)]
pub struct MuLawCodec {
    cfg: MuLawConfig,
    // magnitude bits after the shift
    input_bits: u32,
    decode: Vec<u32>,
}

impl MuLawCodec {
    pub fn new(cfg: MuLawConfig) -> Result<Self> {
        cfg.validate()?;
        let input_bits = 15 - cfg.shift_bits;
        let mut codec = Self {
            cfg,
            input_bits,
            decode: Vec::new(),
        };
        codec.decode = codec.build_decode_table();
        Ok(codec)
    }

    pub fn config(&self) -> &MuLawConfig {
        &self.cfg
    }

    fn full_scale(&self) -> u32 {
        1 << self.input_bits
    }

    /// Magnitude code for a shifted magnitude `a < full_scale`.
    pub fn encode_magnitude(&self, a: u32) -> u32 {
        let a = a.min(self.full_scale() - 1);
        match self.cfg.curve {
            MuLawCurve::Segmented => {
                let m = self.cfg.mantissa_bits();
                let b = self.input_bits;
                if a < 1 << (b - 7) {
                    a >> (b - 7 - m)
                } else {
                    let seg = (31 - a.leading_zeros()) - (b - 8);
                    let mant = (a >> (b - 8 + seg - m)) & ((1 << m) - 1);
                    (seg << m) | mant
                }
            }
            MuLawCurve::Continuous => {
                let n = f64::from(self.cfg.magnitude_levels());
                let y = (1.0 + self.cfg.mu * f64::from(a) / f64::from(self.full_scale())).ln()
                    / (1.0 + self.cfg.mu).ln();
                ((y * n).floor() as u32).min(self.cfg.magnitude_levels() - 1)
            }
        }
    }

    fn build_decode_table(&self) -> Vec<u32> {
        let levels = self.cfg.magnitude_levels() as usize;
        let mut lo = vec![u32::MAX; levels];
        let mut hi = vec![0u32; levels];
        for a in 0..self.full_scale() {
            let c = self.encode_magnitude(a) as usize;
            lo[c] = lo[c].min(a);
            hi[c] = hi[c].max(a);
        }
        let mut table = vec![0u32; levels];
        let mut last = 0u32;
        for c in 0..levels {
            if c == 0 {
                table[0] = 0;
            } else if lo[c] != u32::MAX {
                // midpoint of [lo, hi + 1)
                last = (lo[c] + hi[c] + 1) / 2;
                table[c] = last;
            } else {
                table[c] = last;
            }
        }
        table
    }

    pub fn decode_magnitude(&self, code: u32) -> u32 {
        self.decode[code as usize]
    }

    fn encode_component(&self, x: i16) -> u32 {
        let shifted = i32::from(x) >> self.cfg.shift_bits;
        let mag = self.encode_magnitude(shifted.unsigned_abs());
        let sign = u32::from(shifted < 0 && mag != 0);
        (sign << (self.cfg.value_bits - 1)) | mag
    }

    pub fn compress(&self, block: &PrbBlock) -> Result<CompressedPrb> {
        let mut payload = Bits::with_capacity(COMPONENTS_PER_PRB * self.cfg.value_bits as usize);
        for c in block.components() {
            push_unsigned(&mut payload, self.encode_component(c), self.cfg.value_bits);
        }
        CompressedPrb::new(
            BlockMethod::MuLaw,
            self.cfg.value_bits,
            self.cfg.param_bits,
            self.cfg.shift_bits,
            payload,
        )
    }

    pub fn decompress(&self, c: &CompressedPrb) -> Result<PrbBlock> {
        c.expect_method(BlockMethod::MuLaw)?;
        c.expect_layout(self.cfg.value_bits, self.cfg.param_bits)?;
        if c.shared_param() != self.cfg.shift_bits {
            return Err(Error::invalid(format!(
                "block was compressed with shift {}, codec uses {}",
                c.shared_param(),
                self.cfg.shift_bits
            )));
        }
        let vb = self.cfg.value_bits;
        let mut cur = BitCursor::new(c.payload());
        let values: Vec<i64> = (0..COMPONENTS_PER_PRB)
            .map(|_| {
                let code = cur.read_unsigned(vb).expect("payload length checked");
                let mag = i64::from(self.decode_magnitude(code & ((1 << (vb - 1)) - 1)));
                let v = if code >> (vb - 1) == 1 { -mag } else { mag };
                v << self.cfg.shift_bits
            })
            .collect();
        Ok(block_from_values(values))
    }
}

pub fn mulaw_compress(block: &PrbBlock, cfg: &MuLawConfig) -> Result<CompressedPrb> {
    MuLawCodec::new(*cfg)?.compress(block)
}

pub fn mulaw_decompress(c: &CompressedPrb, cfg: &MuLawConfig) -> Result<PrbBlock> {
    MuLawCodec::new(*cfg)?.decompress(c)
}
