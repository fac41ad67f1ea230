//! MSB-first bit packing helpers shared by the codecs.

use bitvec::prelude::*;

pub type Bits = BitVec<u8, Msb0>;
pub type BitsSlice = BitSlice<u8, Msb0>;

pub(crate) fn push_unsigned(out: &mut Bits, value: u32, width: u32) {
    debug_assert!(width <= 32);
    debug_assert!(width == 32 || value >> width == 0, "{value} overflows {width} bits");
    for k in (0..width).rev() {
        out.push((value >> k) & 1 == 1);
    }
}

/// Two's complement, `width` bits.
pub(crate) fn push_signed(out: &mut Bits, value: i32, width: u32) {
    let mask = if width == 32 { u32::MAX } else { (1u32 << width) - 1 };
    push_unsigned(out, value as u32 & mask, width);
}

/// Sequential reader over a bit slice.
pub(crate) struct BitCursor<'a> {
    bits: &'a BitsSlice,
    pos: usize,
}

impl<'a> BitCursor<'a> {
    pub(crate) fn new(bits: &'a BitsSlice) -> Self {
        Self { bits, pos: 0 }
    }

    pub(crate) fn position(&self) -> usize {
        self.pos
    }


    pub(crate) fn read_unsigned(&mut self, width: u32) -> Option<u32> {
        let end = self.pos + width as usize;
        if end > self.bits.len() {
            return None;
        }
        let v = self.bits[self.pos..end]
            .iter()
            .fold(0u32, |acc, b| (acc << 1) | u32::from(*b));
        self.pos = end;
        Some(v)
    }

    pub(crate) fn read_signed(&mut self, width: u32) -> Option<i32> {
        let raw = self.read_unsigned(width)?;
        Some(sign_extend(raw, width))
    }

    pub(crate) fn read_bit(&mut self) -> Option<bool> {
        self.read_unsigned(1).map(|b| b == 1)
    }
}

pub(crate) fn sign_extend(raw: u32, width: u32) -> i32 {
    if width == 0 {
        return 0;
    }
    let shift = 32 - width;
    ((raw << shift) as i32) >> shift
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn msb_first_layout() {
        let mut bits = Bits::new();
        push_unsigned(&mut bits, 0b101, 3);
        push_signed(&mut bits, -1, 5);
        assert_eq!(bits.as_raw_slice(), &[0b1011_1111]);
    }

    proptest! {
        #[test]
        fn signed_roundtrip(values in proptest::collection::vec((-256i32..256, 9u32..17), 1..40)) {
            let mut bits = Bits::new();
            for &(v, w) in &values {
                push_signed(&mut bits, v, w);
            }
            let mut cur = BitCursor::new(&bits);
            for &(v, w) in &values {
                prop_assert_eq!(cur.read_signed(w), Some(v));
            }
            prop_assert_eq!(cur.position(), bits.len());
            prop_assert_eq!(cur.read_unsigned(1), None);
        }
    }
}
