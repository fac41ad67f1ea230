use std::path::Path;

use clap::ValueEnum;
use fhkit::codecs::symbol_to_iq;
use fhkit::iq_core::{modulate_index, write_iq_samples, IqSample, ModOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};
use crate::output::{resolve, write_atomic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Constellation points of one order, in the modulation-compression
    /// fixed-point format.
    Symbols,
    /// Constellation points with a random order per symbol.
    Mixed,
    /// Uniform samples in `[-amplitude, amplitude]`.
    Noise,
}

pub struct GenArgs<'a> {
    pub kind: Kind,
    pub order: ModOrder,
    pub count: usize,
    pub amplitude: i16,
    pub seed: u64,
    pub out: Option<&'a Path>,
}

pub fn samples(args: &GenArgs) -> CliResult<Vec<IqSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let symbol = |rng: &mut ChaCha8Rng, order: ModOrder| -> CliResult<IqSample> {
        let index = rng.random_range(0..1u32 << order.bits_per_symbol());
        let (point, _) = modulate_index::<f64>(index, order).map_err(|e| CliError::Internal(e.to_string()))?;
        Ok(symbol_to_iq(point, order))
    };
    (0..args.count)
        .map(|_| match args.kind {
            Kind::Symbols => symbol(&mut rng, args.order),
            Kind::Mixed => {
                let order = ModOrder::ALL[rng.random_range(0..ModOrder::ALL.len())];
                symbol(&mut rng, order)
            }
            Kind::Noise => {
                let a = args.amplitude.unsigned_abs() as i32;
                let draw = |rng: &mut ChaCha8Rng| rng.random_range(-a..=a).clamp(-32768, 32767) as i16;
                Ok(IqSample::new(draw(&mut rng), draw(&mut rng)))
            }
        })
        .collect()
}

pub fn run(args: &GenArgs) -> CliResult<String> {
    let samples = samples(args)?;
    let out = resolve(args.out, "samples.iq");
    write_atomic(&out, &write_iq_samples(&samples))?;
    Ok(format!("wrote {} samples to {}\n", samples.len(), out.display()))
}
