use crate::error::{Error, Result};
use crate::iq_core::{prb_count, Numerology, SUBCARRIERS_PER_PRB};

/// Bitwidth of uncompressed 7-2x IQ samples (16-bit I + 16-bit Q).
pub const UNCOMPRESSED_BITWIDTH: u32 = 32;

/// Bitwidths accepted by [`modcomp_capacity`]: the modulation orders plus
/// the uncompressed width.
pub const MODCOMP_BITWIDTHS: [u32; 5] = [2, 4, 6, 8, UNCOMPRESSED_BITWIDTH];

/// Per-RU fronthaul rate of Option 7-2x when every IQ sample is carried in
/// `bitwidth` bits: `12 × PRBs × symbols/ms × W × layers × 1000`.
pub fn modcomp_capacity(
    bandwidth_hz: f64,
    numerology: Numerology,
    overhead: f64,
    layers: u32,
    bitwidth: u32,
) -> Result<u64> {
    if !MODCOMP_BITWIDTHS.contains(&bitwidth) {
        return Err(Error::invalid(format!("bitwidth must be one of {MODCOMP_BITWIDTHS:?}, got {bitwidth}")));
    }
    let prbs = u64::from(prb_count(bandwidth_hz, numerology, overhead)?);
    Ok(SUBCARRIERS_PER_PRB as u64
        * prbs
        * u64::from(numerology.symbols_per_ms())
        * u64::from(bitwidth)
        * u64::from(layers)
        * 1000)
}

/// Capacity saved by sending `compressed` instead of `uncompressed` bits per
/// sample, in percent.
pub fn reduction_percent(compressed: u32, uncompressed: u32) -> Result<f64> {
    if compressed == 0 || compressed > uncompressed {
        return Err(Error::invalid(format!(
            "need 0 < compressed ≤ uncompressed, got {compressed} and {uncompressed}"
        )));
    }
    Ok(100.0 * f64::from(uncompressed - compressed) / f64::from(uncompressed))
}

/// Aggregate fronthaul rate of `n_ru` identical radio units.
pub fn scenario_fronthaul_capacity(n_ru: u32, per_ru: u64) -> Result<u64> {
    if n_ru < 1 {
        return Err(Error::invalid("at least one RU is required"));
    }
    per_ru
        .checked_mul(u64::from(n_ru))
        .ok_or_else(|| Error::Range("aggregate fronthaul rate overflows u64".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mu(m: u8) -> Numerology {
        Numerology::new(m).unwrap()
    }

    #[test]
    fn worked_example() {
        // 12 × 53 × 28 × W × 1000, by hand
        assert_eq!(modcomp_capacity(20e6, mu(1), 0.04, 1, 32).unwrap(), 569_856_000);
        assert_eq!(modcomp_capacity(20e6, mu(1), 0.04, 1, 6).unwrap(), 106_848_000);
        assert_eq!(modcomp_capacity(20e6, mu(1), 0.04, 0, 6).unwrap(), 0);
    }

    #[test]
    fn scenario_scale() {
        let per_ru = modcomp_capacity(100e6, mu(1), 0.04, 1, 32).unwrap();
        assert_eq!(per_ru, 12 * 266 * 28 * 32 * 1000);
        assert_eq!(scenario_fronthaul_capacity(21, per_ru).unwrap(), 21 * 2_860_032_000);
        assert_eq!(scenario_fronthaul_capacity(1, per_ru).unwrap(), per_ru);
        assert!(scenario_fronthaul_capacity(0, per_ru).is_err());
    }

    #[test]
    fn invalid_bitwidth() {
        for w in [0, 1, 3, 16] {
            assert!(modcomp_capacity(20e6, mu(1), 0.04, 1, w).is_err());
        }
    }

    #[test]
    fn reductions() {
        assert_eq!(reduction_percent(6, 32).unwrap(), 81.25);
        assert_eq!(reduction_percent(2, 32).unwrap(), 93.75);
        assert_eq!(reduction_percent(32, 32).unwrap(), 0.0);
        assert!(reduction_percent(0, 32).is_err());
        assert!(reduction_percent(33, 32).is_err());
    }

    proptest! {
        #[test]
        fn width_ratio_is_exact(bw in 5e6f64..400e6, m in 0u8..3, layers in 1u32..9, wi in 0usize..4) {
            let w = MODCOMP_BITWIDTHS[wi];
            let full = modcomp_capacity(bw, mu(m), 0.04, layers, 32).unwrap();
            let comp = modcomp_capacity(bw, mu(m), 0.04, layers, w).unwrap();
            prop_assert_eq!(full * u64::from(w), comp * 32);
        }

        #[test]
        fn scenario_ratio_independent_of_ru_count(n in 1u32..100) {
            let full = scenario_fronthaul_capacity(n, modcomp_capacity(100e6, mu(1), 0.04, 1, 32).unwrap()).unwrap();
            let six = scenario_fronthaul_capacity(n, modcomp_capacity(100e6, mu(1), 0.04, 1, 6).unwrap()).unwrap();
            prop_assert_eq!(six * 32, full * 6);
        }
    }
}
