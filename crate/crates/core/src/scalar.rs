//! Scalar abstractions shared by the numeric parts of the crate.
//!
//! Floating-point code (constellations, beamspace transforms) is written
//! against [`Scalar`] so it runs in either `f32` or `f64`. Rate arithmetic
//! for split dimensioning is written against [`RateScalar`], which is also
//! implemented for an exact rational type.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, FloatConst, Num, ToPrimitive};

/// Real floating-point scalar usable by the constellation and beamspace code.
pub trait Scalar: Float + FloatConst + rustfft::FftNum + Default {
    fn of_f64(v: f64) -> Self;
    fn into_f64(self) -> f64;
}

impl Scalar for f32 {
    fn of_f64(v: f64) -> Self {
        v as f32
    }
    fn into_f64(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn of_f64(v: f64) -> Self {
        v
    }
    fn into_f64(self) -> f64 {
        self
    }
}

/// Scalar used for bit-rate arithmetic. Implemented for `f64` and for the
/// exact [`Ratio<i128>`].
pub trait RateScalar: Num + Clone + PartialOrd + Debug {
    fn from_fraction(num: i128, den: i128) -> Self;

    fn from_int(v: i128) -> Self {
        Self::from_fraction(v, 1)
    }

    fn as_f64(&self) -> f64;
}

impl RateScalar for f64 {
    fn from_fraction(num: i128, den: i128) -> Self {
        num as f64 / den as f64
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl RateScalar for Ratio<i128> {
    fn from_fraction(num: i128, den: i128) -> Self {
        Ratio::new(num, den)
    }
    fn as_f64(&self) -> f64 {
        self.numer().to_f64().unwrap_or(f64::NAN) / self.denom().to_f64().unwrap_or(f64::NAN)
    }
}

/// Parses a decimal literal (`"30.72e6"`, `"0.04"`, `"150000000"`) or a
/// fraction (`"1/3"`) into an exact rational.
pub fn parse_exact(text: &str) -> Option<Ratio<i128>> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_exact(n)?;
        let d = parse_exact(d)?;
        if d == Ratio::from_integer(0) {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value: i128 = digits.parse().ok()?;
    if negative {
        value = -value;
    }
    let scale = exp - frac_part.len() as i32;
    let pow = 10i128.checked_pow(scale.unsigned_abs())?;
    Some(if scale >= 0 {
        Ratio::from_integer(value.checked_mul(pow)?)
    } else {
        Ratio::new(value, pow)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_exact("30.72e6"), Some(Ratio::from_integer(30_720_000)));
        assert_eq!(parse_exact("0.04"), Some(Ratio::new(1, 25)));
        assert_eq!(parse_exact("1/3"), Some(Ratio::new(1, 3)));
        assert_eq!(parse_exact("-2.5"), Some(Ratio::new(-5, 2)));
        assert_eq!(parse_exact("1.5e-3"), Some(Ratio::new(3, 2000)));
        assert_eq!(parse_exact("abc"), None);
        assert_eq!(parse_exact("1/0"), None);
        assert_eq!(parse_exact(""), None);
    }
}
