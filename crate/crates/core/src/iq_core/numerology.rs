use crate::error::{Error, Result};

pub const SUBCARRIERS_PER_PRB: usize = 12;
pub const SYMBOLS_PER_SLOT: u32 = 14;

/// NR numerology index for the sub-6 GHz range (μ = 0, 1, 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Numerology {
    mu: u8,
}

impl Numerology {
    pub fn new(mu: u8) -> Result<Self> {
        if mu > 2 {
            return Err(Error::invalid(format!("numerology must be 0, 1 or 2, got {mu}")));
        }
        Ok(Self { mu })
    }

    pub fn mu(self) -> u8 {
        self.mu
    }

    pub fn subcarrier_spacing_hz(self) -> u32 {
        15_000 << self.mu
    }

    pub fn slots_per_ms(self) -> u32 {
        1 << self.mu
    }

    pub fn symbols_per_ms(self) -> u32 {
        SYMBOLS_PER_SLOT << self.mu
    }

    pub fn slot_duration_s(self) -> f64 {
        1e-3 / f64::from(self.slots_per_ms())
    }
}

impl TryFrom<u8> for Numerology {
    type Error = Error;

    fn try_from(mu: u8) -> Result<Self> {
        Self::new(mu)
    }
}

/// Number of whole PRBs that fit in `bandwidth_hz` after removing the
/// guard/overhead fraction.
pub fn prb_count(bandwidth_hz: f64, numerology: Numerology, overhead: f64) -> Result<u32> {
    if !(bandwidth_hz > 0.0) || !bandwidth_hz.is_finite() {
        return Err(Error::invalid(format!("bandwidth must be positive, got {bandwidth_hz}")));
    }
    if !(0.0..1.0).contains(&overhead) {
        return Err(Error::invalid(format!("overhead must be in [0, 1), got {overhead}")));
    }
    let prb_width = f64::from(numerology.subcarrier_spacing_hz()) * SUBCARRIERS_PER_PRB as f64;
    Ok((bandwidth_hz * (1.0 - overhead) / prb_width).floor() as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mu(m: u8) -> Numerology {
        Numerology::new(m).unwrap()
    }

    #[test]
    fn symbols_per_ms_doubles_with_mu() {
        assert_eq!(mu(0).symbols_per_ms(), 14);
        assert_eq!(mu(1).symbols_per_ms(), 28);
        assert_eq!(mu(2).symbols_per_ms(), 56);
        assert_eq!(mu(1).subcarrier_spacing_hz(), 30_000);
        assert!(Numerology::new(3).is_err());
    }

    #[test]
    fn prb_counts_for_reference_bandwidths() {
        assert_eq!(prb_count(100e6, mu(0), 0.04).unwrap(), 533);
        assert_eq!(prb_count(100e6, mu(1), 0.04).unwrap(), 266);
        assert_eq!(prb_count(100e6, mu(2), 0.04).unwrap(), 133);
        assert_eq!(prb_count(20e6, mu(1), 0.04).unwrap(), 53);
    }

    #[test]
    fn prb_count_rejects_bad_input() {
        assert!(prb_count(0.0, mu(0), 0.04).is_err());
        assert!(prb_count(-1.0, mu(0), 0.04).is_err());
        assert!(prb_count(f64::NAN, mu(0), 0.04).is_err());
        assert!(prb_count(1e6, mu(0), 1.0).is_err());
        assert!(prb_count(1e6, mu(0), -0.1).is_err());
    }

    proptest! {
        #[test]
        fn prb_count_is_monotone(bw in 1e5f64..4e8, extra in 0f64..1e8, oh in 0f64..0.5, doh in 0f64..0.4) {
            for m in 0..3u8 {
                let base = prb_count(bw, mu(m), oh).unwrap();
                prop_assert!(prb_count(bw + extra, mu(m), oh).unwrap() >= base);
                prop_assert!(prb_count(bw, mu(m), oh + doh).unwrap() <= base);
                if m < 2 {
                    prop_assert!(prb_count(bw, mu(m + 1), oh).unwrap() <= base);
                }
            }
        }
    }
}
