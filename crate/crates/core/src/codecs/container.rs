//! Compressed-block file container.
//!
//! A file is a sequence of records. Every record starts with a 4-byte header
//!
//! ```text
//! byte 0     method tag   1 = BFP, 2 = block scaling, 3 = μ-law,
//!                         4 = modulation compression, 5 = beamspace
//! byte 1     config id    block methods / beamspace:
//!                           (value_bits - 1) << 4 | (param_bits - 1)
//!                         modulation compression: W (bits per symbol)
//!                         beamspace, unquantized: 0xFF
//! bytes 2-3  count        complex samples in the record, big-endian u16
//! ```
//!
//! followed by method-specific bytes
//!
//! * μ-law: 1 byte curve (0 segmented, 1 continuous), 8 bytes μ (f64, BE)
//! * modulation compression: `ceil(count / 4)` bytes of 2-bit order codes
//!   (0 = QPSK … 3 = 256QAM), MSB first
//! * beamspace: 1 byte `log2(vector length)`
//!
//! and then the packed body, MSB first, zero-padded to a byte boundary:
//!
//! * block methods: per PRB the shared parameter then 24 values; a partial
//!   last PRB is zero-filled and trimmed again on decode
//! * modulation compression: `count × W` bits
//! * beamspace: per vector a bitmap, then (if any beam is active) the scaler
//!   code, an 8-bit two's complement scaler exponent and the active values;
//!   unquantized vectors carry each active component as an f32
//!
//! Beamspace maps IQ samples to weights as `value / 32768`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::iq_core::{IqSample, ModOrder, PrbBlock, SUBCARRIERS_PER_PRB, UNCOMPRESSED_SAMPLE_BITS};

use super::beamspace::{beamspace_compress, beamspace_decompress, BeamCoefficients, BeamspaceConfig, CompressedBeamVector, InnerStage};
use super::bfp::{bfp_compress, bfp_decompress, BfpConfig};
use super::bits::{push_signed, push_unsigned, BitCursor, Bits, BitsSlice};
use super::block::{BlockMethod, CompressedPrb, COMPONENTS_PER_PRB};
use super::block_scaling::{block_scaling_compress, block_scaling_decompress, BlockScalingConfig, FloatScaler, FLOAT_SCALER_EXPONENT_BITS};
use super::modcomp::{iq_to_symbol, modcomp_compress, modcomp_decompress, symbol_to_iq, ModCompBlock};
use super::mulaw::{MuLawCodec, MuLawConfig, MuLawCurve};

pub const TAG_BFP: u8 = 1;
pub const TAG_BLOCK_SCALING: u8 = 2;
pub const TAG_MULAW: u8 = 3;
pub const TAG_MODCOMP: u8 = 4;
pub const TAG_BEAMSPACE: u8 = 5;

const HEADER_BYTES: usize = 4;
const MAX_RECORD_SAMPLES: usize = u16::MAX as usize;
const WEIGHT_ONE: f64 = 32768.0;

/// Codec and configuration used to write a file.
#[derive(Debug, Clone, PartialEq)]
pub enum CodecSpec {
    Bfp(BfpConfig),
    BlockScaling(BlockScalingConfig),
    MuLaw(MuLawConfig),
    ModComp,
    Beamspace { config: BeamspaceConfig, vector_len: usize },
}

impl CodecSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CodecSpec::Bfp(_) => "bfp",
            CodecSpec::BlockScaling(_) => "block-scaling",
            CodecSpec::MuLaw(_) => "mulaw",
            CodecSpec::ModComp => "modcomp",
            CodecSpec::Beamspace { .. } => "beamspace",
        }
    }

    fn max_record_samples(&self) -> usize {
        match self {
            CodecSpec::ModComp => MAX_RECORD_SAMPLES,
            CodecSpec::Beamspace { vector_len, .. } => MAX_RECORD_SAMPLES / vector_len * vector_len,
            _ => MAX_RECORD_SAMPLES / SUBCARRIERS_PER_PRB * SUBCARRIERS_PER_PRB,
        }
    }
}

/// Sizes seen while encoding or decoding a file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CodecStats {
    pub samples: u64,
    /// `samples × 32`.
    pub uncompressed_bits: u64,
    /// Packed codec bits (shared parameters and payload), without record
    /// headers, order metadata or padding.
    pub compressed_bits: u64,
    pub file_bytes: u64,
}

impl CodecStats {
    /// `None` for an empty input.
    pub fn ratio(&self) -> Option<f64> {
        (self.uncompressed_bits > 0).then(|| self.compressed_bits as f64 / self.uncompressed_bits as f64)
    }
}

fn layout_id(value_bits: u32, param_bits: u32) -> u8 {
    (((value_bits - 1) << 4) | (param_bits - 1)) as u8
}

fn split_layout_id(id: u8) -> (u32, u32) {
    (u32::from(id >> 4) + 1, u32::from(id & 0x0f) + 1)
}

fn push_header(out: &mut Vec<u8>, tag: u8, config_id: u8, count: usize) {
    out.push(tag);
    out.push(config_id);
    out.extend_from_slice(&(count as u16).to_be_bytes());
}

pub fn encode(spec: &CodecSpec, samples: &[IqSample]) -> Result<(Vec<u8>, CodecStats)> {
    let mut out = Vec::new();
    let mut stats = CodecStats {
        samples: samples.len() as u64,
        uncompressed_bits: samples.len() as u64 * u64::from(UNCOMPRESSED_SAMPLE_BITS),
        ..Default::default()
    };
    let mulaw = match spec {
        CodecSpec::MuLaw(cfg) => Some(MuLawCodec::new(*cfg)?),
        _ => None,
    };
    if let CodecSpec::Beamspace { config, vector_len } = spec {
        config.validate()?;
        if !vector_len.is_power_of_two() || *vector_len > 1 << 12 {
            return Err(Error::invalid(format!("beamspace vector length {vector_len} must be a power of two ≤ 4096")));
        }
    }
    for (rec_idx, record) in samples.chunks(spec.max_record_samples()).enumerate() {
        let base_sample = rec_idx * spec.max_record_samples();
        let mut body = Bits::new();
        match spec {
            CodecSpec::Bfp(cfg) => {
                push_header(&mut out, TAG_BFP, layout_id(cfg.mantissa_bits, cfg.exponent_bits), record.len());
                for prb in prbs(record) {
                    body.extend_from_bitslice(&bfp_compress(&prb, cfg)?.to_bits());
                }
            }
            CodecSpec::BlockScaling(cfg) => {
                cfg.validate()?;
                push_header(&mut out, TAG_BLOCK_SCALING, layout_id(cfg.value_bits, cfg.scaler_bits), record.len());
                for prb in prbs(record) {
                    body.extend_from_bitslice(&block_scaling_compress(&prb, cfg)?.to_bits());
                }
            }
            CodecSpec::MuLaw(cfg) => {
                let codec = mulaw.as_ref().expect("built above");
                push_header(&mut out, TAG_MULAW, layout_id(cfg.value_bits, cfg.param_bits), record.len());
                out.push(match cfg.curve {
                    MuLawCurve::Segmented => 0,
                    MuLawCurve::Continuous => 1,
                });
                out.extend_from_slice(&cfg.mu.to_be_bytes());
                for prb in prbs(record) {
                    body.extend_from_bitslice(&codec.compress(&prb)?.to_bits());
                }
            }
            CodecSpec::ModComp => {
                let symbols = record
                    .iter()
                    .enumerate()
                    .map(|(k, s)| {
                        iq_to_symbol(*s).ok_or_else(|| {
                            Error::parse(
                                (base_sample + k) * 4,
                                format!("sample ({}, {}) is not a fixed-point constellation symbol", s.i, s.q),
                            )
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let block = modcomp_compress(&symbols)?;
                push_header(&mut out, TAG_MODCOMP, block.bitwidth() as u8, record.len());
                let mut orders = Bits::new();
                for o in block.per_symbol_orders() {
                    push_unsigned(&mut orders, u32::from(o.code()), 2);
                }
                out.extend_from_slice(&padded_bytes(&orders));
                body.extend_from_bitslice(block.payload());
            }
            CodecSpec::Beamspace { config, vector_len } => {
                let id = match config.inner {
                    InnerStage::BlockScaling(bs) => layout_id(bs.value_bits, bs.scaler_bits),
                    InnerStage::Unquantized => 0xff,
                };
                push_header(&mut out, TAG_BEAMSPACE, id, record.len());
                out.push(vector_len.trailing_zeros() as u8);
                for chunk in record.chunks(*vector_len) {
                    let mut weights: Vec<Complex<f64>> = chunk
                        .iter()
                        .map(|s| Complex::new(f64::from(s.i) / WEIGHT_ONE, f64::from(s.q) / WEIGHT_ONE))
                        .collect();
                    weights.resize(*vector_len, Complex::default());
                    let c = beamspace_compress(&weights, config)?;
                    write_beam_vector(&mut body, &c);
                }
            }
        }
        stats.compressed_bits += body.len() as u64;
        out.extend_from_slice(&padded_bytes(&body));
    }
    stats.file_bytes = out.len() as u64;
    Ok((out, stats))
}

fn prbs(samples: &[IqSample]) -> impl Iterator<Item = PrbBlock> + '_ {
    samples.chunks(SUBCARRIERS_PER_PRB).map(|c| {
        let mut full = [IqSample::ZERO; SUBCARRIERS_PER_PRB];
        full[..c.len()].copy_from_slice(c);
        PrbBlock::new(full)
    })
}

fn padded_bytes(bits: &BitsSlice) -> Vec<u8> {
    let mut v = bits.to_bitvec();
    v.set_uninitialized(false);
    v.into_vec()
}

fn write_beam_vector(body: &mut Bits, c: &CompressedBeamVector<f64>) {
    for a in c.active() {
        body.push(*a);
    }
    match c.coefficients() {
        BeamCoefficients::Quantized { config, scaler, values } => {
            if c.active_count() > 0 {
                push_unsigned(body, scaler.code, config.scaler_bits);
                push_signed(body, i32::from(scaler.exponent), FLOAT_SCALER_EXPONENT_BITS);
                for v in values {
                    push_signed(body, *v, config.value_bits);
                }
            }
        }
        BeamCoefficients::Raw(coeffs) => {
            for v in coeffs {
                push_unsigned(body, (v.re as f32).to_bits(), 32);
                push_unsigned(body, (v.im as f32).to_bits(), 32);
            }
        }
    }
}

fn read_beam_vector(cur: &mut BitCursor<'_>, n: usize, inner: &InnerStage) -> Option<Result<CompressedBeamVector<f64>>> {
    let active: Vec<bool> = (0..n).map(|_| cur.read_bit()).collect::<Option<_>>()?;
    let n_active = active.iter().filter(|a| **a).count();
    let coefficients = match inner {
        InnerStage::BlockScaling(cfg) => {
            let (scaler, values) = if n_active == 0 {
                (FloatScaler { code: 1, exponent: i8::MIN }, Vec::new())
            } else {
                let code = cur.read_unsigned(cfg.scaler_bits)?;
                let exponent = cur.read_signed(FLOAT_SCALER_EXPONENT_BITS)? as i8;
                let values = (0..2 * n_active)
                    .map(|_| cur.read_signed(cfg.value_bits))
                    .collect::<Option<Vec<_>>>()?;
                (FloatScaler { code, exponent }, values)
            };
            BeamCoefficients::Quantized {
                config: *cfg,
                scaler,
                values,
            }
        }
        InnerStage::Unquantized => BeamCoefficients::Raw(
            (0..n_active)
                .map(|_| {
                    let re = f32::from_bits(cur.read_unsigned(32)?);
                    let im = f32::from_bits(cur.read_unsigned(32)?);
                    Some(Complex::new(f64::from(re), f64::from(im)))
                })
                .collect::<Option<Vec<_>>>()?,
        ),
    };
    Some(CompressedBeamVector::new(active, coefficients))
}

fn weight_to_sample(w: Complex<f64>) -> IqSample {
    let q = |x: f64| (x * WEIGHT_ONE).round().clamp(-32768.0, 32767.0) as i16;
    IqSample::new(q(w.re), q(w.im))
}

/// Reads a whole file back into IQ samples.
pub fn decode(bytes: &[u8]) -> Result<(Vec<IqSample>, CodecStats)> {
    let mut samples = Vec::new();
    let mut stats = CodecStats {
        file_bytes: bytes.len() as u64,
        ..Default::default()
    };
    let mut pos = 0usize;
    while pos < bytes.len() {
        let start = pos;
        if bytes.len() - pos < HEADER_BYTES {
            return Err(Error::parse(pos, "truncated record header"));
        }
        let tag = bytes[pos];
        let config_id = bytes[pos + 1];
        let count = u16::from_be_bytes([bytes[pos + 2], bytes[pos + 3]]) as usize;
        pos += HEADER_BYTES;
        let take = |pos: &mut usize, n: usize, what: &str| -> Result<&[u8]> {
            if bytes.len() - *pos < n {
                return Err(Error::parse(*pos, format!("truncated {what}")));
            }
            let s = &bytes[*pos..*pos + n];
            *pos += n;
            Ok(s)
        };
        match tag {
            TAG_BFP | TAG_BLOCK_SCALING | TAG_MULAW => {
                let (value_bits, param_bits) = split_layout_id(config_id);
                let mut codec = None;
                let method = match tag {
                    TAG_BFP => {
                        BfpConfig::new(value_bits, param_bits).map_err(|e| Error::parse(start + 1, e.to_string()))?;
                        BlockMethod::Bfp
                    }
                    TAG_BLOCK_SCALING => {
                        BlockScalingConfig::new(value_bits, param_bits)
                            .map_err(|e| Error::parse(start + 1, e.to_string()))?;
                        BlockMethod::BlockScaling
                    }
                    _ => {
                        let curve = match take(&mut pos, 1, "mu-law curve")?[0] {
                            0 => MuLawCurve::Segmented,
                            1 => MuLawCurve::Continuous,
                            other => return Err(Error::parse(pos - 1, format!("unknown mu-law curve {other}"))),
                        };
                        let mu = f64::from_be_bytes(take(&mut pos, 8, "mu")?.try_into().expect("8 bytes"));
                        codec = Some((curve, mu));
                        BlockMethod::MuLaw
                    }
                };
                let prb_bits = (param_bits + COMPONENTS_PER_PRB as u32 * value_bits) as usize;
                let n_prb = count.div_ceil(SUBCARRIERS_PER_PRB);
                let body_bytes = (n_prb * prb_bits).div_ceil(8);
                let body_at = pos;
                let body = BitsSlice::from_slice(take(&mut pos, body_bytes, "block body")?);
                let mut decoded = Vec::with_capacity(n_prb * SUBCARRIERS_PER_PRB);
                let mut mulaw_codecs: Vec<(u32, MuLawCodec)> = Vec::new();
                for k in 0..n_prb {
                    let bits = &body[k * prb_bits..(k + 1) * prb_bits];
                    let c = CompressedPrb::from_bits(method, value_bits, param_bits, bits)?;
                    let block = match method {
                        BlockMethod::Bfp => bfp_decompress(&c, &BfpConfig::new(value_bits, param_bits)?),
                        BlockMethod::BlockScaling => {
                            block_scaling_decompress(&c, &BlockScalingConfig::new(value_bits, param_bits)?)
                        }
                        BlockMethod::MuLaw => {
                            let (curve, mu) = codec.expect("set for mu-law");
                            let shift = c.shared_param();
                            if !mulaw_codecs.iter().any(|(s, _)| *s == shift) {
                                let cfg = MuLawConfig {
                                    value_bits,
                                    mu,
                                    shift_bits: shift,
                                    param_bits,
                                    curve,
                                };
                                mulaw_codecs.push((shift, MuLawCodec::new(cfg)?));
                            }
                            let codec = &mulaw_codecs.iter().find(|(s, _)| *s == shift).expect("inserted").1;
                            codec.decompress(&c)
                        }
                    }
                    .map_err(|e| Error::parse(body_at + k * prb_bits / 8, e.to_string()))?;
                    decoded.extend_from_slice(block.samples());
                }
                decoded.truncate(count);
                samples.extend(decoded);
                stats.compressed_bits += (n_prb * prb_bits) as u64;
            }
            TAG_MODCOMP => {
                let max_order = ModOrder::from_bits_per_symbol(u32::from(config_id))
                    .map_err(|e| Error::parse(start + 1, e.to_string()))?;
                let meta = BitsSlice::from_slice(take(&mut pos, count.div_ceil(4), "order metadata")?);
                let orders = (0..count)
                    .map(|k| {
                        let code = (u8::from(meta[2 * k]) << 1) | u8::from(meta[2 * k + 1]);
                        ModOrder::from_code(code).expect("2-bit code")
                    })
                    .collect::<Vec<_>>();
                let payload_bits = count * max_order.bits_per_symbol() as usize;
                let body_at = pos;
                let body = BitsSlice::from_slice(take(&mut pos, payload_bits.div_ceil(8), "payload")?);
                let block = ModCompBlock::from_parts(max_order, orders.clone(), body[..payload_bits].to_bitvec())
                    .map_err(|e| Error::parse(body_at, e.to_string()))?;
                let symbols = modcomp_decompress::<f64>(&block).map_err(|e| Error::parse(body_at, e.to_string()))?;
                samples.extend(symbols.iter().zip(&orders).map(|((p, _), o)| symbol_to_iq(*p, *o)));
                stats.compressed_bits += payload_bits as u64;
            }
            TAG_BEAMSPACE => {
                let log_n = take(&mut pos, 1, "beamspace vector length")?[0];
                if log_n > 12 {
                    return Err(Error::parse(pos - 1, format!("beamspace vector length 2^{log_n} too large")));
                }
                let n = 1usize << log_n;
                let inner = if config_id == 0xff {
                    InnerStage::Unquantized
                } else {
                    let (vb, sb) = split_layout_id(config_id);
                    InnerStage::BlockScaling(
                        BlockScalingConfig::new(vb, sb).map_err(|e| Error::parse(start + 1, e.to_string()))?,
                    )
                };
                let body_at = pos;
                let body = BitsSlice::from_slice(&bytes[pos..]);
                let mut cur = BitCursor::new(body);
                let mut decoded = Vec::with_capacity(count);
                for _ in 0..count.div_ceil(n) {
                    let c = read_beam_vector(&mut cur, n, &inner)
                        .ok_or_else(|| Error::parse(body_at + cur.position() / 8, "truncated beamspace vector"))?
                        .map_err(|e| Error::parse(body_at + cur.position() / 8, e.to_string()))?;
                    stats.compressed_bits += c.bit_len() as u64;
                    decoded.extend(beamspace_decompress(&c)?.into_iter().map(weight_to_sample));
                }
                decoded.truncate(count);
                samples.extend(decoded);
                pos += cur.position().div_ceil(8);
            }
            other => return Err(Error::parse(start, format!("unknown method tag {other}"))),
        }
    }
    stats.samples = samples.len() as u64;
    stats.uncompressed_bits = stats.samples * u64::from(UNCOMPRESSED_SAMPLE_BITS);
    Ok((samples, stats))
}
