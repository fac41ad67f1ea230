//! Block floating point: signed mantissas with one shared unsigned exponent
//! per PRB. Mantissas are arithmetic right shifts (truncation), so a block
//! that already fits the mantissa width passes through unchanged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iq_core::PrbBlock;

use super::bits::{push_signed, BitCursor, Bits};
use super::block::{block_from_values, BlockMethod, CompressedPrb, COMPONENTS_PER_PRB};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BfpConfig {
    pub mantissa_bits: u32,
    pub exponent_bits: u32,
}

impl Default for BfpConfig {
    fn default() -> Self {
        Self {
            mantissa_bits: 9,
            exponent_bits: 8,
        }
    }
}

impl BfpConfig {
    pub fn new(mantissa_bits: u32, exponent_bits: u32) -> Result<Self> {
        let cfg = Self {
            mantissa_bits,
            exponent_bits,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=16).contains(&self.mantissa_bits) {
            return Err(Error::invalid(format!(
                "BFP mantissa width must be 2..=16 bits, got {}",
                self.mantissa_bits
            )));
        }
        if !(2..=8).contains(&self.exponent_bits) {
            return Err(Error::invalid(format!(
                "BFP exponent width must be 2..=8 bits, got {}",
                self.exponent_bits
            )));
        }
        Ok(())
    }
}

fn fits(value: i32, bits: u32) -> bool {
    let lim = 1i32 << (bits - 1);
    (-lim..lim).contains(&value)
}

/// Smallest shift that brings every component into the mantissa range.
pub fn bfp_exponent(block: &PrbBlock, mantissa_bits: u32) -> u32 {
    let comps = block.components();
    (0..=16)
        .find(|&e| comps.iter().all(|&c| fits(i32::from(c) >> e, mantissa_bits)))
        .unwrap_or(16)
}

pub fn bfp_compress(block: &PrbBlock, cfg: &BfpConfig) -> Result<CompressedPrb> {
    cfg.validate()?;
    let e = bfp_exponent(block, cfg.mantissa_bits);
    if cfg.exponent_bits < 32 && e >> cfg.exponent_bits != 0 {
        return Err(Error::Range(format!(
            "exponent {e} does not fit in {} bits",
            cfg.exponent_bits
        )));
    }
    let mut payload = Bits::with_capacity(COMPONENTS_PER_PRB * cfg.mantissa_bits as usize);
    for c in block.components() {
        push_signed(&mut payload, i32::from(c) >> e, cfg.mantissa_bits);
    }
    CompressedPrb::new(BlockMethod::Bfp, cfg.mantissa_bits, cfg.exponent_bits, e, payload)
}

pub fn bfp_decompress(c: &CompressedPrb, cfg: &BfpConfig) -> Result<PrbBlock> {
    c.expect_method(BlockMethod::Bfp)?;
    c.expect_layout(cfg.mantissa_bits, cfg.exponent_bits)?;
    let e = c.shared_param();
    if e > 16 {
        return Err(Error::CorruptBlock(format!("BFP exponent {e} exceeds 16")));
    }
    let mut cur = BitCursor::new(c.payload());
    let values = (0..COMPONENTS_PER_PRB).map(|_| {
        let m = cur.read_signed(cfg.mantissa_bits).expect("payload length checked on construction");
        i64::from(m) << e
    });
    Ok(block_from_values(values.collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iq_core::IqSample;
    use proptest::prelude::*;

    fn block_with(first: i16) -> PrbBlock {
        let mut comps = [0i16; 24];
        comps[0] = first;
        PrbBlock::from_components(&comps)
    }

    // Brute force over all exponents, largest first.
    fn oracle_exponent(block: &PrbBlock, m: u32) -> u32 {
        let max = (1i32 << (m - 1)) - 1;
        let min = -(1i32 << (m - 1));
        let mut best = 16;
        for e in (0..=16).rev() {
            if block.components().iter().all(|&c| {
                let v = i32::from(c) >> e;
                v >= min && v <= max
            }) {
                best = e;
            }
        }
        best
    }

    #[test]
    fn small_components_are_lossless() {
        let comps: [i16; 24] = core::array::from_fn(|k| (k as i16 * 23) % 512 - 256);
        let block = PrbBlock::from_components(&comps);
        let c = bfp_compress(&block, &BfpConfig::default()).unwrap();
        assert_eq!(c.shared_param(), 0);
        assert_eq!(bfp_decompress(&c, &BfpConfig::default()).unwrap(), block);
    }

    #[test]
    fn full_scale_component_needs_exponent_seven() {
        let block = block_with(32767);
        assert_eq!(oracle_exponent(&block, 9), 7);
        let c = bfp_compress(&block, &BfpConfig::default()).unwrap();
        assert_eq!(c.shared_param(), 7);
        let mut cur = BitCursor::new(c.payload());
        assert_eq!(cur.read_signed(9), Some(255));
        let out = bfp_decompress(&c, &BfpConfig::default()).unwrap();
        assert_eq!(out.samples()[0], IqSample::new(32640, 0));
    }

    #[test]
    fn zero_block() {
        let c = bfp_compress(&PrbBlock::zeros(), &BfpConfig::default()).unwrap();
        assert_eq!(c.shared_param(), 0);
        assert!(c.payload().not_any());
        assert_eq!(bfp_decompress(&c, &BfpConfig::default()).unwrap(), PrbBlock::zeros());
    }

    #[test]
    fn exponent_overflow_is_a_range_error() {
        let cfg = BfpConfig::new(2, 2).unwrap();
        // 32767 >> e fits 2-bit signed only for e >= 14, beyond a 2-bit exponent
        let err = bfp_compress(&block_with(32767), &cfg).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }

    #[test]
    fn config_bounds() {
        assert!(BfpConfig::new(1, 8).is_err());
        assert!(BfpConfig::new(17, 8).is_err());
        assert!(BfpConfig::new(9, 1).is_err());
        assert!(BfpConfig::new(9, 9).is_err());
    }

    #[test]
    fn method_mismatch_is_rejected() {
        let c = bfp_compress(&PrbBlock::zeros(), &BfpConfig::default()).unwrap();
        let other = CompressedPrb::from_bits(BlockMethod::MuLaw, 9, 8, &c.to_bits()).unwrap();
        assert!(matches!(
            bfp_decompress(&other, &BfpConfig::default()),
            Err(Error::InvalidArgument(_))
        ));
        assert!(bfp_decompress(&c, &BfpConfig::new(8, 8).unwrap()).is_err());
    }

    #[test]
    fn error_bound_at_exponent_seven() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let cfg = BfpConfig::default();
        for _ in 0..2000 {
            let mut comps: [i16; 24] = core::array::from_fn(|_| rng.random());
            comps[rng.random_range(0..24)] = if rng.random() { i16::MAX } else { 16384 };
            let block = PrbBlock::from_components(&comps);
            let c = bfp_compress(&block, &cfg).unwrap();
            assert_eq!(c.shared_param(), 7);
            let out = bfp_decompress(&c, &cfg).unwrap();
            for (x, y) in comps.iter().zip(out.components()) {
                let d = i32::from(*x) - i32::from(y);
                assert!((0..128).contains(&d), "{x} -> {y}");
            }
        }
    }

    proptest! {
        #[test]
        fn exponent_matches_brute_force(comps in proptest::array::uniform24(any::<i16>()), m in 2u32..=16) {
            let block = PrbBlock::from_components(&comps);
            prop_assert_eq!(bfp_exponent(&block, m), oracle_exponent(&block, m));
        }

        #[test]
        fn error_is_below_two_to_the_exponent(comps in proptest::array::uniform24(any::<i16>())) {
            let cfg = BfpConfig::default();
            let block = PrbBlock::from_components(&comps);
            let c = bfp_compress(&block, &cfg).unwrap();
            prop_assert_eq!(c.bit_len(), 24 * 9 + 8);
            let out = bfp_decompress(&c, &cfg).unwrap();
            let bound = 1i32 << c.shared_param();
            for (x, y) in comps.iter().zip(out.components()) {
                prop_assert!((i32::from(*x) - i32::from(y)).abs() < bound);
            }
        }
    }
}
