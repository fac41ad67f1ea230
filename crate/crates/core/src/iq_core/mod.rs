//! Fixed-point IQ samples, NR QAM constellations and numerology arithmetic.

mod constellation;
mod iqfile;
mod numerology;
mod sample;

pub use constellation::{
    constellation, demodulate, lattice_to_bits, modulate, modulate_index, normalization_scale,
    LatticePoint, ModOrder,
};
pub use iqfile::{read_iq_samples, write_iq_samples, BYTES_PER_SAMPLE};
pub use numerology::{prb_count, Numerology, SUBCARRIERS_PER_PRB, SYMBOLS_PER_SLOT};
pub use sample::{IqSample, PrbBlock, UNCOMPRESSED_SAMPLE_BITS};
