//! NR square-QAM constellations (TS 38.211 modulation mapper bit labelling).
//!
//! Bits are labelled `b0 b1 ... b(M-1)`; even-position bits drive the I
//! dimension and odd-position bits the Q dimension. Lattice levels are odd
//! integers in `[-(L-1), L-1]` with `L = 2^(M/2)` levels per dimension.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One of the four NR data modulations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModOrder {
    Qpsk,
    Qam16,
    Qam64,
    Qam256,
}

impl ModOrder {
    pub const ALL: [ModOrder; 4] = [ModOrder::Qpsk, ModOrder::Qam16, ModOrder::Qam64, ModOrder::Qam256];

    pub fn bits_per_symbol(self) -> u32 {
        match self {
            ModOrder::Qpsk => 2,
            ModOrder::Qam16 => 4,
            ModOrder::Qam64 => 6,
            ModOrder::Qam256 => 8,
        }
    }

    pub fn bits_per_dimension(self) -> u32 {
        self.bits_per_symbol() / 2
    }

    pub fn levels_per_dimension(self) -> i32 {
        1 << self.bits_per_dimension()
    }

    /// Largest lattice level magnitude, `L - 1`.
    pub fn max_level(self) -> i32 {
        self.levels_per_dimension() - 1
    }

    pub fn from_bits_per_symbol(bits: u32) -> Result<Self> {
        match bits {
            2 => Ok(ModOrder::Qpsk),
            4 => Ok(ModOrder::Qam16),
            6 => Ok(ModOrder::Qam64),
            8 => Ok(ModOrder::Qam256),
            _ => Err(Error::invalid(format!(
                "modulation order must be 2, 4, 6 or 8 bits per symbol, got {bits}"
            ))),
        }
    }

    /// Two-bit code used in block headers: 0 = QPSK ... 3 = 256QAM.
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            ModOrder::Qpsk => "qpsk",
            ModOrder::Qam16 => "16qam",
            ModOrder::Qam64 => "64qam",
            ModOrder::Qam256 => "256qam",
        }
    }

    pub fn is_valid_level(self, level: i32) -> bool {
        level % 2 != 0 && level.abs() <= self.max_level()
    }
}

impl serde::Serialize for ModOrder {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for ModOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for ModOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "qpsk" | "2" => Ok(ModOrder::Qpsk),
            "16qam" | "qam16" | "4" => Ok(ModOrder::Qam16),
            "64qam" | "qam64" | "6" => Ok(ModOrder::Qam64),
            "256qam" | "qam256" | "8" => Ok(ModOrder::Qam256),
            other => Err(Error::invalid(format!("unknown modulation `{other}`"))),
        }
    }
}

/// Un-normalized constellation point: a pair of odd integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticePoint {
    pub i: i32,
    pub q: i32,
}

impl LatticePoint {
    pub const fn new(i: i32, q: i32) -> Self {
        Self { i, q }
    }

    pub fn is_valid_for(self, order: ModOrder) -> bool {
        order.is_valid_level(self.i) && order.is_valid_level(self.q)
    }

    pub fn to_complex<T: Scalar>(self, order: ModOrder) -> Complex<T> {
        let scale = normalization_scale::<T>(order);
        Complex::new(T::of_f64(f64::from(self.i)), T::of_f64(f64::from(self.q))) * scale
    }
}

/// Amplitude scale giving unit average symbol power: `1/sqrt(2(L²-1)/3)`.
pub fn normalization_scale<T: Scalar>(order: ModOrder) -> T {
    let l = f64::from(order.levels_per_dimension());
    T::of_f64((2.0 * (l * l - 1.0) / 3.0).sqrt().recip())
}

// Level for one dimension from its bits (b0, b2, b4, ... or b1, b3, ...).
fn level_from_bits(bits: &[u8]) -> i32 {
    let n = bits.len();
    let mut v = 1i32;
    for idx in (1..n).rev() {
        v = (1 << (n - idx)) - (1 - 2 * i32::from(bits[idx])) * v;
    }
    (1 - 2 * i32::from(bits[0])) * v
}

fn bits_from_level(level: i32, n: usize, out: &mut [u8]) {
    out[0] = u8::from(level < 0);
    let mut v = level.abs();
    for (idx, bit) in out.iter_mut().enumerate().take(n).skip(1) {
        let d = (1 << (n - idx)) - v;
        *bit = u8::from(d < 0);
        v = d.abs();
    }
}

/// Maps `M` bits to a lattice point and its unit-power complex value.
pub fn modulate<T: Scalar>(bits: &[u8], order: ModOrder) -> Result<(LatticePoint, Complex<T>)> {
    let m = order.bits_per_symbol() as usize;
    if bits.len() != m {
        return Err(Error::invalid(format!(
            "{order} needs {m} bits per symbol, got {}",
            bits.len()
        )));
    }
    if bits.iter().any(|&b| b > 1) {
        return Err(Error::invalid("bit values must be 0 or 1"));
    }
    let i_bits: Vec<u8> = bits.iter().step_by(2).copied().collect();
    let q_bits: Vec<u8> = bits.iter().skip(1).step_by(2).copied().collect();
    let point = LatticePoint::new(level_from_bits(&i_bits), level_from_bits(&q_bits));
    Ok((point, point.to_complex(order)))
}

/// [`modulate`] with the bit group given as an integer, `b0` in the MSB.
pub fn modulate_index<T: Scalar>(index: u32, order: ModOrder) -> Result<(LatticePoint, Complex<T>)> {
    let m = order.bits_per_symbol();
    if index >> m != 0 {
        return Err(Error::invalid(format!("index {index} does not fit in {m} bits")));
    }
    let bits: Vec<u8> = (0..m).map(|k| ((index >> (m - 1 - k)) & 1) as u8).collect();
    modulate(&bits, order)
}

/// Inverse labelling: the bit group that [`modulate`] maps to `point`.
pub fn lattice_to_bits(point: LatticePoint, order: ModOrder) -> Result<Vec<u8>> {
    if !point.is_valid_for(order) {
        return Err(Error::invalid(format!("{point:?} is not a {order} constellation point")));
    }
    let n = order.bits_per_dimension() as usize;
    let mut i_bits = vec![0u8; n];
    let mut q_bits = vec![0u8; n];
    bits_from_level(point.i, n, &mut i_bits);
    bits_from_level(point.q, n, &mut q_bits);
    Ok(i_bits.into_iter().zip(q_bits).flat_map(|(i, q)| [i, q]).collect())
}

// Nearest odd level; a value exactly between two levels goes to the smaller one.
fn nearest_level(x: f64, max_level: i32) -> i32 {
    let l = if x.is_finite() {
        2.0 * (x / 2.0).ceil() - 1.0
    } else {
        -1.0
    };
    (l.clamp(-f64::from(max_level), f64::from(max_level))) as i32
}

/// Hard-decision demapper: bits of the nearest constellation point.
pub fn demodulate<T: Scalar>(value: Complex<T>, order: ModOrder) -> Vec<u8> {
    let scale = normalization_scale::<f64>(order);
    let x = value.re.into_f64() / scale;
    let y = value.im.into_f64() / scale;
    let point = LatticePoint::new(
        nearest_level(x, order.max_level()),
        nearest_level(y, order.max_level()),
    );
    lattice_to_bits(point, order).expect("nearest level is always on the lattice")
}

/// Every point of the constellation, indexed by its bit group (b0 = MSB).
pub fn constellation<T: Scalar>(order: ModOrder) -> Vec<(LatticePoint, Complex<T>)> {
    (0..1u32 << order.bits_per_symbol())
        .map(|idx| modulate_index(idx, order).expect("index within range"))
        .collect()
}
