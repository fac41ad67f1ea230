//! Modulation compression: lossless transport of QAM symbols at `W = M`
//! bits per symbol.
//!
//! Every lattice level `l` of a symbol with `L` levels per dimension is
//! shifted to the non-negative index `u = (l + L - 1) / 2`, so the smaller
//! constellations overlap the low corner of the largest one in the block.
//! Indices are packed in `W/2` bits per dimension, I before Q, where `W` is
//! the bit count of the largest order in the block. The per-symbol order
//! list travels next to the payload, not inside it, so the payload is exactly
//! `symbols × W` bits. The receiver unshifts with each symbol's own order and
//! rescales by that order's normalization.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::iq_core::{normalization_scale, IqSample, LatticePoint, ModOrder};
use crate::scalar::Scalar;

use super::bits::{push_unsigned, BitCursor, Bits, BitsSlice};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModCompBlock {
    max_order: ModOrder,
    per_symbol_orders: Vec<ModOrder>,
    payload: Bits,
}

impl ModCompBlock {
    pub fn from_parts(max_order: ModOrder, per_symbol_orders: Vec<ModOrder>, payload: Bits) -> Result<Self> {
        let expected = per_symbol_orders.len() * max_order.bits_per_symbol() as usize;
        if payload.len() != expected {
            return Err(Error::CorruptBlock(format!(
                "payload holds {} bits, {} symbols at W={} need {expected}",
                payload.len(),
                per_symbol_orders.len(),
                max_order.bits_per_symbol()
            )));
        }
        if let Some(o) = per_symbol_orders.iter().find(|o| **o > max_order) {
            return Err(Error::CorruptBlock(format!(
                "symbol order {o} exceeds block maximum {max_order}"
            )));
        }
        Ok(Self {
            max_order,
            per_symbol_orders,
            payload,
        })
    }

    pub fn max_order(&self) -> ModOrder {
        self.max_order
    }

    /// Payload bits per symbol.
    pub fn bitwidth(&self) -> u32 {
        self.max_order.bits_per_symbol()
    }

    pub fn per_symbol_orders(&self) -> &[ModOrder] {
        &self.per_symbol_orders
    }

    pub fn payload(&self) -> &BitsSlice {
        &self.payload
    }

    pub fn symbol_count(&self) -> usize {
        self.per_symbol_orders.len()
    }
}

/// Shifted index of a lattice level.
pub fn shift_level(level: i32, order: ModOrder) -> u32 {
    ((level + order.max_level()) / 2) as u32
}

pub fn unshift_index(index: u32, order: ModOrder) -> i32 {
    2 * index as i32 - order.max_level()
}

pub fn modcomp_compress(symbols: &[(LatticePoint, ModOrder)]) -> Result<ModCompBlock> {
    if let Some((p, o)) = symbols.iter().find(|(p, o)| !p.is_valid_for(*o)) {
        return Err(Error::invalid(format!("{p:?} is not a {o} constellation point")));
    }
    let max_order = symbols.iter().map(|(_, o)| *o).max().unwrap_or(ModOrder::Qpsk);
    let half = max_order.bits_per_dimension();
    let mut payload = Bits::with_capacity(symbols.len() * max_order.bits_per_symbol() as usize);
    for (p, o) in symbols {
        push_unsigned(&mut payload, shift_level(p.i, *o), half);
        push_unsigned(&mut payload, shift_level(p.q, *o), half);
    }
    ModCompBlock::from_parts(max_order, symbols.iter().map(|(_, o)| *o).collect(), payload)
}

/// Recovered lattice points with their normalized values.
pub fn modcomp_decompress<T: Scalar>(block: &ModCompBlock) -> Result<Vec<(LatticePoint, Complex<T>)>> {
    let half = block.max_order.bits_per_dimension();
    let mut cur = BitCursor::new(&block.payload);
    block
        .per_symbol_orders
        .iter()
        .enumerate()
        .map(|(k, &order)| {
            let mut read = || -> Result<i32> {
                let u = cur
                    .read_unsigned(half)
                    .ok_or_else(|| Error::CorruptBlock("payload ended early".into()))?;
                if u as i32 >= order.levels_per_dimension() {
                    return Err(Error::CorruptBlock(format!(
                        "symbol {k}: index {u} outside the {order} constellation"
                    )));
                }
                Ok(unshift_index(u, order))
            };
            let i = read()?;
            let q = read()?;
            let point = LatticePoint::new(i, q);
            Ok((point, point.to_complex(order)))
        })
        .collect()
}

/// Fixed-point scale used when constellation symbols are stored as IQ
/// samples: `round(value × 2^13)` per component.
pub const SYMBOL_FIXED_POINT_ONE: f64 = 8192.0;

fn level_to_fixed(level: i32, order: ModOrder) -> i16 {
    (f64::from(level) * normalization_scale::<f64>(order) * SYMBOL_FIXED_POINT_ONE).round() as i16
}

/// Fixed-point IQ sample of a constellation symbol.
pub fn symbol_to_iq(point: LatticePoint, order: ModOrder) -> IqSample {
    IqSample::new(level_to_fixed(point.i, order), level_to_fixed(point.q, order))
}

fn fixed_point_table() -> &'static HashMap<i16, Vec<(ModOrder, i32)>> {
    static TABLE: OnceLock<HashMap<i16, Vec<(ModOrder, i32)>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t: HashMap<i16, Vec<(ModOrder, i32)>> = HashMap::new();
        for order in ModOrder::ALL {
            for level in (-order.max_level()..=order.max_level()).step_by(2) {
                t.entry(level_to_fixed(level, order)).or_default().push((order, level));
            }
        }
        t
    })
}

/// Recognizes an IQ sample written by [`symbol_to_iq`]. Returns the smallest
/// order whose constellation contains it.
pub fn iq_to_symbol(sample: IqSample) -> Option<(LatticePoint, ModOrder)> {
    let table = fixed_point_table();
    let is = table.get(&sample.i)?;
    let qs = table.get(&sample.q)?;
    is.iter()
        .filter_map(|(oi, li)| qs.iter().find(|(oq, _)| oq == oi).map(|(_, lq)| (LatticePoint::new(*li, *lq), *oi)))
        .min_by_key(|(_, o)| *o)
}
