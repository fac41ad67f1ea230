use crate::iq_core::{ModOrder, SUBCARRIERS_PER_PRB, UNCOMPRESSED_SAMPLE_BITS};

use super::bfp::BfpConfig;
use super::block::COMPONENTS_PER_PRB;
use super::block_scaling::BlockScalingConfig;
use super::mulaw::MuLawConfig;

/// What to compute a compression ratio for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RatioSpec {
    Bfp(BfpConfig),
    BlockScaling(BlockScalingConfig),
    MuLaw(MuLawConfig),
    /// Any per-PRB layout, not validated (degenerate widths are allowed).
    Block { value_bits: u32, shared_bits: u32 },
    ModComp(ModOrder),
}

/// Compressed size over uncompressed size for one PRB.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressionRatio {
    pub compressed_bits: u64,
    pub original_bits: u64,
}

impl CompressionRatio {
    pub fn value(self) -> f64 {
        self.compressed_bits as f64 / self.original_bits as f64
    }

    /// True when the "compressed" form is larger than the original.
    pub fn is_expansion(self) -> bool {
        self.compressed_bits > self.original_bits
    }
}

pub fn compression_ratio(spec: RatioSpec) -> CompressionRatio {
    let original_bits = (SUBCARRIERS_PER_PRB as u32 * UNCOMPRESSED_SAMPLE_BITS) as u64;
    let block = |value_bits: u32, shared_bits: u32| CompressionRatio {
        compressed_bits: COMPONENTS_PER_PRB as u64 * u64::from(value_bits) + u64::from(shared_bits),
        original_bits,
    };
    match spec {
        RatioSpec::Bfp(c) => block(c.mantissa_bits, c.exponent_bits),
        RatioSpec::BlockScaling(c) => block(c.value_bits, c.scaler_bits),
        RatioSpec::MuLaw(c) => block(c.value_bits, c.param_bits),
        RatioSpec::Block {
            value_bits,
            shared_bits,
        } => block(value_bits, shared_bits),
        RatioSpec::ModComp(order) => CompressionRatio {
            compressed_bits: SUBCARRIERS_PER_PRB as u64 * u64::from(order.bits_per_symbol()),
            original_bits,
        },
    }
}
