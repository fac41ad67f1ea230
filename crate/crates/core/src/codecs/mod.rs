//! Fronthaul IQ compression: block floating point, block scaling, μ-law,
//! beamspace and modulation compression, plus the compressed-block file
//! container.

mod beamspace;
mod bfp;
mod bits;
mod block;
mod block_scaling;
pub mod container;
mod modcomp;
mod mulaw;
mod ratio;

pub use beamspace::{
    beamspace_compress, beamspace_decompress, beamspace_transform, inverse_beamspace_transform,
    BeamCoefficients, BeamspaceConfig, CompressedBeamVector, InnerStage,
};
pub use bfp::{bfp_compress, bfp_decompress, bfp_exponent, BfpConfig};
pub use bits::{Bits, BitsSlice};
pub use block::{BlockMethod, CompressedPrb, COMPONENTS_PER_PRB};
pub use block_scaling::{
    block_scaling_compress, block_scaling_decompress, dequantize_real_block, quantize_real_block,
    BlockScalingConfig, FloatScaler, FLOAT_SCALER_EXPONENT_BITS,
};
pub use modcomp::{
    iq_to_symbol, modcomp_compress, modcomp_decompress, shift_level, symbol_to_iq, unshift_index,
    ModCompBlock, SYMBOL_FIXED_POINT_ONE,
};
pub use mulaw::{mulaw_compress, mulaw_decompress, MuLawCodec, MuLawConfig, MuLawCurve};
pub use ratio::{compression_ratio, CompressionRatio, RatioSpec};
