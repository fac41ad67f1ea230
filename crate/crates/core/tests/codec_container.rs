use fhkit::codecs::container::{decode, encode, CodecSpec};
use fhkit::codecs::{
    compression_ratio, symbol_to_iq, BeamspaceConfig, BfpConfig, BlockScalingConfig, InnerStage, MuLawConfig,
    RatioSpec,
};
use fhkit::iq_core::{modulate_index, read_iq_samples, write_iq_samples, IqSample, ModOrder};
use proptest::prelude::*;

fn arb_samples(max: usize) -> impl Strategy<Value = Vec<IqSample>> {
    proptest::collection::vec((any::<i16>(), any::<i16>()).prop_map(|(i, q)| IqSample::new(i, q)), 0..max)
}

fn arb_symbols(max: usize) -> impl Strategy<Value = Vec<IqSample>> {
    proptest::collection::vec((0usize..4, any::<u32>()), 0..max).prop_map(|v| {
        v.into_iter()
            .map(|(o, idx)| {
                let order = ModOrder::ALL[o];
                let (p, _) = modulate_index::<f64>(idx % (1 << order.bits_per_symbol()), order).unwrap();
                symbol_to_iq(p, order)
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn modcomp_files_are_lossless(samples in arb_symbols(300)) {
        let (bytes, stats) = encode(&CodecSpec::ModComp, &samples).unwrap();
        let (back, _) = decode(&bytes).unwrap();
        prop_assert_eq!(&back, &samples);
        prop_assert_eq!(stats.samples, samples.len() as u64);
    }

    #[test]
    fn block_files_keep_length_and_are_idempotent(samples in arb_samples(100)) {
        for spec in [
            CodecSpec::Bfp(BfpConfig::default()),
            CodecSpec::BlockScaling(BlockScalingConfig::default()),
            CodecSpec::MuLaw(MuLawConfig::default()),
        ] {
            let (bytes, _) = encode(&spec, &samples).unwrap();
            let (once, _) = decode(&bytes).unwrap();
            prop_assert_eq!(once.len(), samples.len());
            let (again, _) = decode(&encode(&spec, &once).unwrap().0).unwrap();
            prop_assert_eq!(again, once);
        }
    }

    #[test]
    fn truncated_files_are_rejected(samples in arb_samples(40), cut in 1usize..8) {
        prop_assume!(!samples.is_empty());
        let (bytes, _) = encode(&CodecSpec::Bfp(BfpConfig::default()), &samples).unwrap();
        let cut = cut.min(bytes.len());
        prop_assert!(decode(&bytes[..bytes.len() - cut]).is_err());
    }
}

#[test]
fn file_ratio_matches_per_prb_ratio() {
    let samples: Vec<IqSample> = (0..1200).map(|k| IqSample::new((k * 37 % 30000) as i16, -(k as i16))).collect();
    for (spec, ratio) in [
        (CodecSpec::Bfp(BfpConfig::new(9, 8).unwrap()), RatioSpec::Bfp(BfpConfig::new(9, 8).unwrap())),
        (
            CodecSpec::BlockScaling(BlockScalingConfig::new(9, 8).unwrap()),
            RatioSpec::BlockScaling(BlockScalingConfig::new(9, 8).unwrap()),
        ),
        (CodecSpec::MuLaw(MuLawConfig::default()), RatioSpec::MuLaw(MuLawConfig::default())),
    ] {
        let (_, stats) = encode(&spec, &samples).unwrap();
        assert_eq!(stats.ratio(), Some(compression_ratio(ratio).value()));
        // (24 × 9 + 8) / (12 × 32)
        assert!((stats.ratio().unwrap() - 224.0 / 384.0).abs() < 1e-12);
    }
}

#[test]
fn beamspace_file_roundtrip_is_close() {
    let weights: Vec<IqSample> = (0..64)
        .map(|k| {
            let phase = 2.0 * std::f64::consts::PI * 5.0 * k as f64 / 64.0;
            IqSample::new((phase.cos() * 4000.0) as i16, (phase.sin() * 4000.0) as i16)
        })
        .collect();
    let spec = CodecSpec::Beamspace {
        config: BeamspaceConfig {
            threshold: 0.05,
            inner: InnerStage::BlockScaling(BlockScalingConfig::new(12, 8).unwrap()),
        },
        vector_len: 64,
    };
    let (bytes, stats) = encode(&spec, &weights).unwrap();
    assert!(stats.ratio().unwrap() < 0.25, "{:?}", stats);
    let (back, _) = decode(&bytes).unwrap();
    for (a, b) in weights.iter().zip(&back) {
        assert!((i32::from(a.i) - i32::from(b.i)).abs() <= 40, "{a:?} {b:?}");
        assert!((i32::from(a.q) - i32::from(b.q)).abs() <= 40, "{a:?} {b:?}");
    }
}

#[test]
fn iq_files_roundtrip() {
    let samples = vec![IqSample::new(1, -2), IqSample::new(i16::MIN, i16::MAX)];
    assert_eq!(read_iq_samples(&write_iq_samples(&samples)).unwrap(), samples);
}
