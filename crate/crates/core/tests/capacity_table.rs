use fhkit::capacity::{required_capacity, CapacityValue, PlanConfig, SplitOption, SplitParams};
use fhkit::{Exact, ExactSplitParams};
use num_rational::Ratio;
use proptest::prelude::*;

fn preset() -> PlanConfig {
    PlanConfig::preset("table1-example").unwrap()
}

fn gbps(option: SplitOption, p: &ExactSplitParams) -> Option<f64> {
    match required_capacity(option, p).unwrap() {
        CapacityValue::Bps(v) => Some(*v.numer() as f64 / *v.denom() as f64 / 1e9),
        CapacityValue::NotApplicable => None,
    }
}

// Example column as printed in the requirements table.
const PUBLISHED: [(SplitOption, f64, Option<f64>); 7] = [
    (SplitOption::Opt1, 4.0, Some(3.0)),
    (SplitOption::Opt2, 4.016, Some(3.024)),
    (SplitOption::Opt6, 4.133, Some(5.640)),
    (SplitOption::Opt7_3, 13.2, None),
    (SplitOption::Opt7_2x, 22.204, Some(21.624)),
    (SplitOption::Opt7_1, 86.136, None),
    (SplitOption::Opt8, 157.28, Some(157.28)),
];

#[test]
fn published_example_column() {
    let cfg = preset();
    for (option, dl, ul) in PUBLISHED {
        let got = gbps(option, &cfg.dl).unwrap();
        assert!((got - dl).abs() / dl < 0.005, "{option} DL {got} vs {dl}");
        if let Some(ul) = ul {
            let got = gbps(option, &cfg.ul).unwrap();
            assert!((got - ul).abs() / ul < 0.005, "{option} UL {got} vs {ul}");
        }
    }
    assert_eq!(gbps(SplitOption::Opt4, &cfg.dl), gbps(SplitOption::Opt1, &cfg.dl));
    assert_eq!(gbps(SplitOption::Opt7_3, &cfg.ul), None);
}

#[test]
fn option_7_1_uplink_follows_formula() {
    // The table prints 86.136 Gbps for both directions; with the 80 Mbps UL
    // MAC info the formula gives 86.096 Gbps.
    let v = required_capacity(SplitOption::Opt7_1, &preset().ul).unwrap().bps().unwrap();
    assert_eq!(v, Ratio::from_integer(86_096_000_000));
}

#[test]
fn exact_values_match_hand_arithmetic() {
    let cfg = preset();
    let int = |v: i128| CapacityValue::Bps(Ratio::from_integer(v));
    // (PR + CR) × 5 × 4 × 8/6 with PR = 150 Mbps, CR = 5 Mbps
    assert_eq!(
        required_capacity(SplitOption::Opt6, &cfg.dl).unwrap(),
        CapacityValue::Bps(Ratio::new(155_000_000 * 5 * 4 * 8, 6))
    );
    // 155 Mbps × 20 × 4/3 × 3 + 800 Mbps, exact only with R held as 1/3
    assert_eq!(required_capacity(SplitOption::Opt7_3, &cfg.dl).unwrap(), int(13_200_000_000));
    assert_eq!(required_capacity(SplitOption::Opt7_2x, &cfg.dl).unwrap(), int(3000 * 28 * 32 * 8 * 1000 + 700_000_000));
    assert_eq!(required_capacity(SplitOption::Opt7_2x, &cfg.ul).unwrap(), int(3000 * 28 * 32 * 8 * 1000 + 120_000_000));
    assert_eq!(required_capacity(SplitOption::Opt8, &cfg.dl).unwrap(), int(30_720_000 * 32 * 32 * 5));
    // 50 Mbps × 5 × 8 × 6/4
    assert_eq!(required_capacity(SplitOption::Opt1, &cfg.ul).unwrap(), int(3_000_000_000));
    assert_eq!(required_capacity(SplitOption::Opt2, &cfg.ul).unwrap(), int(3_024_000_000));
}

#[test]
fn downlink_capacity_grows_toward_lower_splits() {
    let cfg = preset();
    let chain = [
        SplitOption::Opt1,
        SplitOption::Opt2,
        SplitOption::Opt6,
        SplitOption::Opt7_3,
        SplitOption::Opt7_2x,
        SplitOption::Opt7_1,
        SplitOption::Opt8,
    ];
    let values: Vec<Exact> = chain
        .iter()
        .map(|o| required_capacity(*o, &cfg.dl).unwrap().bps().unwrap())
        .collect();
    for pair in values.windows(2) {
        assert!(pair[0] <= pair[1], "{values:?}");
    }
}

#[test]
fn rows_7_1_and_7_2_are_consistent() {
    let cfg = preset();
    for p in [&cfg.dl, &cfg.ul] {
        let d = required_capacity(SplitOption::Opt7_1, p).unwrap().bps().unwrap()
            - required_capacity(SplitOption::Opt7_2x, p).unwrap().bps().unwrap();
        let mac = p.mac_info_7_1.unwrap() - p.mac_info_7_2.unwrap();
        let expected = Ratio::from_integer(32 * 1000 * 84_000 * (32 - 8)) + mac;
        assert_eq!(d, expected);
    }
}

#[test]
fn f64_and_exact_agree() {
    let cfg = preset();
    for dir in [&cfg.dl, &cfg.ul] {
        let approx: SplitParams<f64> = dir.to_f64();
        for o in SplitOption::ALL {
            let e = required_capacity(o, dir).unwrap().bps();
            let f = required_capacity(o, &approx).unwrap().bps();
            match (e, f) {
                (Some(e), Some(f)) => {
                    let e = *e.numer() as f64 / *e.denom() as f64;
                    assert!((e - f).abs() <= 1e-9 * e, "{o}: {e} vs {f}");
                }
                (None, None) => {}
                other => panic!("{o}: {other:?}"),
            }
        }
    }
}

fn scaled(p: &ExactSplitParams, field: &str, k: i128) -> ExactSplitParams {
    let mut q = p.clone();
    let slot = q.field_mut(field).unwrap();
    *slot = slot.map(|v| v * Ratio::from_integer(k));
    q
}

fn strip_mac_and_signaling(p: &ExactSplitParams) -> ExactSplitParams {
    let mut q = p.clone();
    for f in ["mac_info", "mac_info_7_1", "mac_info_7_2", "mac_info_7_3", "signaling"] {
        *q.field_mut(f).unwrap() = Some(Ratio::from_integer(0));
    }
    q
}

proptest! {
    #[test]
    fn linear_in_peak_rate_and_bandwidth(k in 1i128..1000, dl in any::<bool>()) {
        let cfg = preset();
        let base = strip_mac_and_signaling(if dl { &cfg.dl } else { &cfg.ul });
        for o in [SplitOption::Opt1, SplitOption::Opt2, SplitOption::Opt4] {
            let v = required_capacity(o, &base).unwrap().bps().unwrap();
            for f in ["peak_rate", "bandwidth"] {
                let s = required_capacity(o, &scaled(&base, f, k)).unwrap().bps().unwrap();
                prop_assert_eq!(s, v * Ratio::from_integer(k));
            }
        }
        // option 6 scales with bandwidth, and with PR when CR scales along
        let v = required_capacity(SplitOption::Opt6, &base).unwrap().bps().unwrap();
        let s = required_capacity(SplitOption::Opt6, &scaled(&base, "bandwidth", k)).unwrap().bps().unwrap();
        prop_assert_eq!(s, v * Ratio::from_integer(k));
        let both = scaled(&scaled(&base, "peak_rate", k), "control_rate", k);
        prop_assert_eq!(required_capacity(SplitOption::Opt6, &both).unwrap().bps().unwrap(), v * Ratio::from_integer(k));
    }

    #[test]
    fn iq_options_linear_in_stream_dimensions(k in 1i128..1000) {
        let base = strip_mac_and_signaling(&preset().dl);
        for (o, fields) in [
            (SplitOption::Opt7_2x, ["bitwidth", "layers", "subcarriers"]),
            (SplitOption::Opt7_1, ["bitwidth", "antenna_ports", "subcarriers"]),
        ] {
            let v = required_capacity(o, &base).unwrap().bps().unwrap();
            for f in fields {
                let s = required_capacity(o, &scaled(&base, f, k)).unwrap().bps().unwrap();
                prop_assert_eq!(s, v * Ratio::from_integer(k));
            }
        }
    }
}
