//! Fronthaul toolkit: IQ sample primitives, fronthaul compression codecs,
//! functional-split capacity planning and a system-level simulator.

pub mod capacity;
pub mod codecs;
pub mod error;
pub mod iq_core;
pub mod scalar;
pub mod simsys;

pub use error::{Error, Result};
pub use scalar::{parse_exact, RateScalar, Scalar};

pub type Complex32 = num_complex::Complex<f32>;
pub type Complex64 = num_complex::Complex<f64>;
pub type Exact = num_rational::Ratio<i128>;
pub type CompressedBeamVector64 = codecs::CompressedBeamVector<f64>;
pub type CompressedBeamVector32 = codecs::CompressedBeamVector<f32>;
pub type ExactSplitParams = capacity::SplitParams<Exact>;
pub type SplitParamsF64 = capacity::SplitParams<f64>;
