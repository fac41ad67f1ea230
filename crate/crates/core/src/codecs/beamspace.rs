//! Beamspace compression of beamforming weight vectors.
//!
//! The weight vector is moved to the beam domain with a unitary DFT, weak
//! beams (magnitude below `threshold × peak`) are switched off, and the
//! surviving coefficients are block-scaled. The compressed form carries an
//! activity bitmap plus the quantized active coefficients.

use num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::block_scaling::{dequantize_real_block, quantize_real_block, BlockScalingConfig, FloatScaler, FLOAT_SCALER_EXPONENT_BITS};

/// How active beamspace coefficients are carried.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InnerStage {
    BlockScaling(BlockScalingConfig),
    /// Coefficients kept at full precision (used to isolate the transform).
    Unquantized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BeamspaceConfig {
    pub threshold: f64,
    pub inner: InnerStage,
}

impl Default for BeamspaceConfig {
    fn default() -> Self {
        Self {
            threshold: 0.1,
            inner: InnerStage::BlockScaling(BlockScalingConfig::default()),
        }
    }
}

impl BeamspaceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::invalid(format!(
                "beamspace threshold must be in [0, 1], got {}",
                self.threshold
            )));
        }
        if let InnerStage::BlockScaling(bs) = &self.inner {
            bs.validate()?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BeamCoefficients<T> {
    Quantized {
        config: BlockScalingConfig,
        scaler: FloatScaler,
        /// Interleaved real/imaginary parts of the active coefficients.
        values: Vec<i32>,
    },
    Raw(Vec<Complex<T>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedBeamVector<T> {
    active: Vec<bool>,
    coefficients: BeamCoefficients<T>,
}

impl<T: Scalar> CompressedBeamVector<T> {
    pub fn new(active: Vec<bool>, coefficients: BeamCoefficients<T>) -> Result<Self> {
        if !active.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "beamspace length {} is not a power of two",
                active.len()
            )));
        }
        let n_active = active.iter().filter(|a| **a).count();
        let carried = match &coefficients {
            BeamCoefficients::Quantized { values, .. } => values.len() / 2,
            BeamCoefficients::Raw(v) => v.len(),
        };
        if carried != n_active {
            return Err(Error::CorruptBlock(format!(
                "bitmap marks {n_active} active beams but {carried} coefficients are present"
            )));
        }
        Ok(Self { active, coefficients })
    }

    pub fn len(&self) -> usize {
        self.active.len()
    }

    pub fn is_empty(&self) -> bool {
        self.active.is_empty()
    }

    pub fn active(&self) -> &[bool] {
        &self.active
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|a| **a).count()
    }

    pub fn coefficients(&self) -> &BeamCoefficients<T> {
        &self.coefficients
    }

    /// Bits on the wire: bitmap, scaler (when any beam is active) and values.
    /// Unquantized coefficients count as 32-bit floats per component.
    pub fn bit_len(&self) -> usize {
        let n = self.active_count();
        self.len()
            + match &self.coefficients {
                BeamCoefficients::Quantized { config, .. } if n > 0 => {
                    (config.scaler_bits + FLOAT_SCALER_EXPONENT_BITS) as usize
                        + 2 * n * config.value_bits as usize
                }
                BeamCoefficients::Quantized { .. } => 0,
                BeamCoefficients::Raw(_) => 64 * n,
            }
    }
}

/// Unitary DFT, `X[k] = N^{-1/2} Σ x[n] e^{-j2πkn/N}`.
pub fn beamspace_transform<T: Scalar>(weights: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    unitary_dft(weights, false)
}

pub fn inverse_beamspace_transform<T: Scalar>(beams: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    unitary_dft(beams, true)
}

fn unitary_dft<T: Scalar>(input: &[Complex<T>], inverse: bool) -> Result<Vec<Complex<T>>> {
    let n = input.len();
    if !n.is_power_of_two() {
        return Err(Error::invalid(format!("beamspace length {n} is not a power of two")));
    }
    let mut buf = input.to_vec();
    let mut planner = FftPlanner::<T>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    fft.process(&mut buf);
    let norm = T::of_f64((n as f64).sqrt()).recip();
    for v in &mut buf {
        *v = *v * norm;
    }
    Ok(buf)
}

pub fn beamspace_compress<T: Scalar>(weights: &[Complex<T>], cfg: &BeamspaceConfig) -> Result<CompressedBeamVector<T>> {
    cfg.validate()?;
    let beams = beamspace_transform(weights)?;
    let peak = beams.iter().fold(0.0f64, |m, c| m.max(c.norm().into_f64()));
    let cutoff = cfg.threshold * peak;
    let active: Vec<bool> = beams
        .iter()
        .map(|c| peak > 0.0 && c.norm().into_f64() >= cutoff)
        .collect();
    let kept: Vec<Complex<T>> = beams
        .iter()
        .zip(&active)
        .filter(|(_, a)| **a)
        .map(|(c, _)| *c)
        .collect();
    let coefficients = match cfg.inner {
        InnerStage::Unquantized => BeamCoefficients::Raw(kept),
        InnerStage::BlockScaling(bs) => {
            let parts: Vec<f64> = kept.iter().flat_map(|c| [c.re.into_f64(), c.im.into_f64()]).collect();
            let (scaler, values) = quantize_real_block(&parts, &bs)?;
            BeamCoefficients::Quantized {
                config: bs,
                scaler,
                values,
            }
        }
    };
    CompressedBeamVector::new(active, coefficients)
}

pub fn beamspace_decompress<T: Scalar>(c: &CompressedBeamVector<T>) -> Result<Vec<Complex<T>>> {
    let kept: Vec<Complex<T>> = match &c.coefficients {
        BeamCoefficients::Raw(v) => v.clone(),
        BeamCoefficients::Quantized { scaler, values, .. } => dequantize_real_block(*scaler, values)
            .chunks_exact(2)
            .map(|p| Complex::new(T::of_f64(p[0]), T::of_f64(p[1])))
            .collect(),
    };
    let mut kept = kept.into_iter();
    let beams: Vec<Complex<T>> = c
        .active
        .iter()
        .map(|&a| if a { kept.next().unwrap_or_default() } else { Complex::default() })
        .collect();
    inverse_beamspace_transform(&beams)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    // Direct O(N²) DFT used as the reference transform.
    fn naive_dft(x: &[Complex<f64>]) -> Vec<Complex<f64>> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex::default(), |acc, (m, v)| {
                    let ang = -2.0 * PI * (k * m) as f64 / n as f64;
                    acc + v * Complex::from_polar(1.0, ang)
                }) / (n as f64).sqrt()
            })
            .collect()
    }

    fn norm(v: &[Complex<f64>]) -> f64 {
        v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    fn diff(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    }

    fn random_weights(n: usize, seed: u64) -> Vec<Complex<f64>> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect()
    }

    fn dft_column(n: usize, k: usize) -> Vec<Complex<f64>> {
        (0..n)
            .map(|m| Complex::from_polar(1.0 / (n as f64).sqrt(), 2.0 * PI * (k * m) as f64 / n as f64))
            .collect()
    }

    #[test]
    fn transform_matches_naive_dft() {
        let w = random_weights(32, 1);
        let fast = beamspace_transform(&w).unwrap();
        assert!(diff(&fast, &naive_dft(&w)) < 1e-12);
        assert!((norm(&fast) - norm(&w)).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_power_of_two() {
        let w = vec![Complex::<f64>::default(); 12];
        assert!(matches!(
            beamspace_compress(&w, &BeamspaceConfig::default()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn single_beam_keeps_one_coefficient() {
        let w = dft_column(64, 5);
        let cfg = BeamspaceConfig {
            threshold: 0.5,
            ..Default::default()
        };
        let c = beamspace_compress(&w, &cfg).unwrap();
        assert_eq!(c.active_count(), 1);
        assert!(c.active()[5]);
        let back = beamspace_decompress(&c).unwrap();
        let BeamCoefficients::Quantized { scaler, .. } = c.coefficients() else {
            panic!("expected quantized coefficients")
        };
        // one complex coefficient, each part off by at most half a scaler step
        assert!(diff(&back, &w) <= scaler.value() / 2.0 * 2f64.sqrt() + 1e-12);
        assert_eq!(c.bit_len(), 64 + 8 + 8 + 2 * 9);
    }

    #[test]
    fn zero_threshold_keeps_everything() {
        let w = random_weights(16, 2);
        let cfg = BeamspaceConfig {
            threshold: 0.0,
            ..Default::default()
        };
        let c = beamspace_compress(&w, &cfg).unwrap();
        assert_eq!(c.active_count(), 16);
        let BeamCoefficients::Quantized { scaler, .. } = c.coefficients() else {
            panic!()
        };
        let back = beamspace_decompress(&c).unwrap();
        assert!(diff(&back, &w) <= scaler.value() / 2.0 * (32f64).sqrt() + 1e-12);
    }

    #[test]
    fn unquantized_zero_threshold_is_exact() {
        let cfg = BeamspaceConfig {
            threshold: 0.0,
            inner: InnerStage::Unquantized,
        };
        for seed in 0..20 {
            let w = random_weights(64, seed);
            let back = beamspace_decompress(&beamspace_compress(&w, &cfg).unwrap()).unwrap();
            assert!(diff(&back, &w) < 1e-9);
        }
    }

    #[test]
    fn unit_threshold_keeps_only_the_peak() {
        let w = random_weights(32, 3);
        let spectrum = naive_dft(&w);
        let peak_idx = (0..32)
            .max_by(|&a, &b| spectrum[a].norm().partial_cmp(&spectrum[b].norm()).unwrap())
            .unwrap();
        let dropped: f64 = spectrum
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != peak_idx)
            .map(|(_, c)| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let cfg = BeamspaceConfig {
            threshold: 1.0,
            ..Default::default()
        };
        let c = beamspace_compress(&w, &cfg).unwrap();
        assert_eq!(c.active_count(), 1);
        assert!(c.active()[peak_idx]);
        let BeamCoefficients::Quantized { scaler, .. } = c.coefficients() else {
            panic!()
        };
        let quant = scaler.value() / 2.0 * 2f64.sqrt();
        let err = diff(&beamspace_decompress(&c).unwrap(), &w);
        assert!(err <= dropped + quant + 1e-12, "{err} > {dropped} + {quant}");
        assert!(err >= dropped - quant - 1e-12);
    }

    #[test]
    fn error_bound_for_random_thresholds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for seed in 0..50 {
            let w = random_weights(32, 100 + seed);
            let th: f64 = rng.random_range(0.0..1.0);
            let cfg = BeamspaceConfig {
                threshold: th,
                ..Default::default()
            };
            let c = beamspace_compress(&w, &cfg).unwrap();
            let spectrum = naive_dft(&w);
            let dropped: f64 = spectrum
                .iter()
                .zip(c.active())
                .filter(|(_, a)| !**a)
                .map(|(s, _)| s.norm_sqr())
                .sum::<f64>()
                .sqrt();
            let BeamCoefficients::Quantized { scaler, .. } = c.coefficients() else {
                panic!()
            };
            let quant = scaler.value() / 2.0 * ((2 * c.active_count()) as f64).sqrt();
            let err = diff(&beamspace_decompress(&c).unwrap(), &w);
            assert!(err <= dropped + quant + 1e-12);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let w: Vec<Complex<f32>> = dft_column(8, 3)
            .iter()
            .map(|c| Complex::new(c.re as f32, c.im as f32))
            .collect();
        let cfg = BeamspaceConfig {
            threshold: 0.5,
            inner: InnerStage::Unquantized,
        };
        let c = beamspace_compress(&w, &cfg).unwrap();
        assert_eq!(c.active_count(), 1);
        let back = beamspace_decompress(&c).unwrap();
        for (a, b) in back.iter().zip(&w) {
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn all_zero_vector() {
        let w = vec![Complex::<f64>::default(); 8];
        let c = beamspace_compress(&w, &BeamspaceConfig::default()).unwrap();
        assert_eq!(c.active_count(), 0);
        assert_eq!(c.bit_len(), 8);
        assert_eq!(beamspace_decompress(&c).unwrap(), w);
    }
}
