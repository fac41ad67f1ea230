//! Link abstraction: the 256QAM MCS table, a logistic BLER curve per MCS and
//! the transport block size rule.

use crate::iq_core::{ModOrder, Numerology, SUBCARRIERS_PER_PRB};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McsEntry {
    pub index: u8,
    pub mod_order: ModOrder,
    /// Target code rate × 1024.
    pub rate_x1024: f64,
}

impl McsEntry {
    pub fn code_rate(&self) -> f64 {
        self.rate_x1024 / 1024.0
    }

    /// Information bits per resource element.
    pub fn spectral_efficiency(&self) -> f64 {
        f64::from(self.mod_order.bits_per_symbol()) * self.code_rate()
    }
}

const fn entry(index: u8, mod_order: ModOrder, rate_x1024: f64) -> McsEntry {
    McsEntry {
        index,
        mod_order,
        rate_x1024,
    }
}

use ModOrder::{Qam16, Qam256, Qam64, Qpsk};

/// PDSCH MCS index table 2 (up to 256QAM), indices 0–27.
pub const MCS_TABLE_2: [McsEntry; 28] = [
    entry(0, Qpsk, 120.0),
    entry(1, Qpsk, 193.0),
    entry(2, Qpsk, 308.0),
    entry(3, Qpsk, 449.0),
    entry(4, Qpsk, 602.0),
    entry(5, Qam16, 378.0),
    entry(6, Qam16, 434.0),
    entry(7, Qam16, 490.0),
    entry(8, Qam16, 553.0),
    entry(9, Qam16, 616.0),
    entry(10, Qam16, 658.0),
    entry(11, Qam64, 466.0),
    entry(12, Qam64, 517.0),
    entry(13, Qam64, 567.0),
    entry(14, Qam64, 616.0),
    entry(15, Qam64, 666.0),
    entry(16, Qam64, 719.0),
    entry(17, Qam64, 772.0),
    entry(18, Qam64, 822.0),
    entry(19, Qam64, 873.0),
    entry(20, Qam256, 682.5),
    entry(21, Qam256, 711.0),
    entry(22, Qam256, 754.0),
    entry(23, Qam256, 797.0),
    entry(24, Qam256, 841.0),
    entry(25, Qam256, 885.0),
    entry(26, Qam256, 916.5),
    entry(27, Qam256, 948.0),
];

/// Gap between the BLER midpoint of an MCS and the Shannon SNR of its
/// spectral efficiency.
pub const BLER_MARGIN_DB: f64 = 1.0;
/// Steepness of the BLER curve, per dB.
pub const BLER_SLOPE_PER_DB: f64 = 1.5;
/// Link adaptation picks the highest MCS whose predicted BLER is at most this.
pub const TARGET_BLER: f64 = 0.1;
/// One of the 14 OFDM symbols in a slot carries control.
pub const DATA_SYMBOLS_PER_SLOT: u32 = 13;

/// SNR at which `mcs` has 50% block error rate.
pub fn bler_midpoint_db(mcs: &McsEntry) -> f64 {
    10.0 * (2f64.powf(mcs.spectral_efficiency()) - 1.0).log10() + BLER_MARGIN_DB
}

pub fn bler(snr_db: f64, mcs: &McsEntry) -> f64 {
    1.0 / (1.0 + (BLER_SLOPE_PER_DB * (snr_db - bler_midpoint_db(mcs))).exp())
}

/// Highest MCS not above `cap` that meets the BLER target at `sinr_db`;
/// index 0 when none does.
pub fn select_mcs(sinr_db: f64, cap: ModOrder) -> &'static McsEntry {
    MCS_TABLE_2
        .iter()
        .rev()
        .filter(|e| e.mod_order <= cap)
        .find(|e| bler(sinr_db, e) <= TARGET_BLER)
        .unwrap_or(&MCS_TABLE_2[0])
}

/// Bits carried by one PRB over one slot, before flooring.
pub fn bits_per_prb(mcs: &McsEntry, layers: u32) -> f64 {
    (SUBCARRIERS_PER_PRB as u32 * DATA_SYMBOLS_PER_SLOT) as f64
        * f64::from(mcs.mod_order.bits_per_symbol())
        * mcs.code_rate()
        * f64::from(layers)
}

/// Simplified transport block size in bits. The slot length does not enter
/// the formula; the numerology is accepted for call-site symmetry.
pub fn transport_block_size(mcs: &McsEntry, n_prb: u32, _numerology: Numerology, layers: u32) -> u64 {
    (f64::from(n_prb) * bits_per_prb(mcs, layers)).floor() as u64
}

/// Smallest PRB count whose transport block holds `bits`.
pub fn prbs_for_bits(mcs: &McsEntry, bits: u64, layers: u32) -> u32 {
    let per = bits_per_prb(mcs, layers);
    let mut n = (bits as f64 / per).ceil() as u32;
    while ((f64::from(n) * per).floor() as u64) < bits {
        n += 1;
    }
    n.max(1)
}
