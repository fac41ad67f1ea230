use fhkit::capacity::{modcomp_capacity, scenario_fronthaul_capacity};
use fhkit::iq_core::{ModOrder, Numerology};
use fhkit::simsys::{
    fronthaul_utilization, peak_cell_rate_bps, run, KpiReport, Scenario, ScenarioConfig, WidthPolicy,
};

fn cfg(cap: ModOrder, load_mbps: f64, mu: u8) -> ScenarioConfig {
    ScenarioConfig {
        mod_cap: cap,
        offered_load_per_ue_bps: load_mbps * 1e6,
        numerology: mu,
        ..Default::default()
    }
}

fn short(mut c: ScenarioConfig) -> ScenarioConfig {
    c.sim_duration_s = 0.2;
    c
}

fn conserved(r: &KpiReport) -> bool {
    r.delivered_bytes + r.dropped_bytes + r.in_flight_bytes == r.offered_bytes
}

#[test]
fn default_deployment_has_21_cells_and_84_ues() {
    let s = Scenario::build(&ScenarioConfig::default()).unwrap();
    assert_eq!(s.cells.len(), 21);
    assert_eq!(s.ues.len(), 84);
}

#[test]
fn identical_config_gives_identical_report() {
    let c = short(cfg(ModOrder::Qam64, 20.0, 1));
    let a = run(&c).unwrap();
    let b = run(&c).unwrap();
    assert_eq!(a.report, b.report);
    assert_eq!(a.packets, b.packets);

    let other = run(&ScenarioConfig { rng_seed: 2, ..c }).unwrap();
    assert_ne!(a.report, other.report);
}

#[test]
fn bytes_are_conserved() {
    for (cap, load) in [(ModOrder::Qam256, 10.0), (ModOrder::Qpsk, 30.0), (ModOrder::Qam16, 20.0)] {
        let r = run(&short(cfg(cap, load, 0))).unwrap().report;
        assert!(conserved(&r), "{cap:?} {load}: {r:?}");
        assert!(r.delivered_bytes <= r.offered_bytes);
    }
}

#[test]
fn error_free_link_delivers_everything() {
    let c = ScenarioConfig {
        forced_bler: Some(0.0),
        ..short(cfg(ModOrder::Qam256, 10.0, 1))
    };
    let out = run(&c).unwrap();
    let r = &out.report;
    assert_eq!(r.dropped_bytes, 0);
    assert_eq!(r.delivered_bytes, r.offered_bytes);
    assert_eq!(r.delivered_packets * 600, r.offered_bytes);
    let slot = Numerology::new(1).unwrap().slot_duration_s();
    assert!(out.packets.iter().all(|p| p.delay_s >= slot - 1e-12));
}

#[test]
fn always_failing_link_drops_everything() {
    let c = ScenarioConfig {
        forced_bler: Some(1.0),
        // light enough that four transmissions per block still fit
        ..short(cfg(ModOrder::Qam256, 2.0, 1))
    };
    let r = run(&c).unwrap().report;
    assert_eq!(r.delivered_bytes, 0);
    assert_eq!(r.mean_throughput_bps, 0.0);
    assert_eq!(r.dropped_bytes, r.offered_bytes);
    assert!(r.offered_bytes > 0);
    assert_eq!(r.median_delay_s, None);
}

#[test]
fn zero_load_is_idle() {
    let r = run(&short(cfg(ModOrder::Qam256, 0.0, 1))).unwrap().report;
    assert_eq!(r.offered_bytes, 0);
    assert_eq!(r.delivered_bytes, 0);
    assert_eq!(r.mean_throughput_bps, 0.0);
    assert_eq!(r.median_delay_s, None);
    assert!(r.fronthaul_utilization_bps.iter().all(|&u| u == 0.0));
}

#[test]
fn static_requirement_comes_from_capacity_module() {
    for mu in 0..3u8 {
        for cap in ModOrder::ALL {
            let mut c = short(cfg(cap, 0.0, mu));
            c.sim_duration_s = 0.01;
            let r = run(&c).unwrap().report;
            let per_ru = modcomp_capacity(100e6, Numerology::new(mu).unwrap(), 0.04, 1, cap.bits_per_symbol()).unwrap();
            assert_eq!(r.fronthaul_requirement_bps, scenario_fronthaul_capacity(21, per_ru).unwrap());
        }
    }
    // 21 RUs at μ=1 and 8 bits: 266 PRB × 12 × 28 symbols/ms × 8 × 1000 × 21
    let r = run(&ScenarioConfig { sim_duration_s: 0.01, ..cfg(ModOrder::Qam256, 0.0, 1) }).unwrap().report;
    assert_eq!(r.fronthaul_requirement_bps, 266 * 12 * 28 * 8 * 1000 * 21);
}

#[test]
fn utilization_is_bounded_and_linear_in_width() {
    let out = run(&short(cfg(ModOrder::Qam64, 20.0, 1))).unwrap();
    let r = &out.report;
    assert_eq!(r.fronthaul_utilization_bps.len(), 200);
    assert!(r.fronthaul_utilization_bps.iter().all(|&u| u <= r.fronthaul_requirement_bps as f64));
    assert!(r.fronthaul_utilization_mean() > 0.0);

    let w32 = fronthaul_utilization(&out.schedule, WidthPolicy::Fixed(32));
    let w6 = fronthaul_utilization(&out.schedule, WidthPolicy::Fixed(6));
    for (a, b) in w32.iter().zip(&w6) {
        assert_eq!(*b, a * 6.0 / 32.0);
    }
    assert_eq!(fronthaul_utilization(&out.schedule, WidthPolicy::Fixed(6)), r.fronthaul_utilization_bps);
    let scheduled = fronthaul_utilization(&out.schedule, WidthPolicy::MaxScheduled);
    assert!(scheduled.iter().zip(&w6).all(|(s, f)| s <= f));
}

#[test]
fn fully_loaded_network_reaches_static_requirement() {
    for layers in [1, 2] {
        let c = ScenarioConfig {
            offered_load_per_ue_bps: 400e6,
            sim_duration_s: 0.02,
            forced_bler: Some(0.0),
            layers,
            ..cfg(ModOrder::Qam16, 0.0, 1)
        };
        let r = run(&c).unwrap().report;
        // the first window may start before any packet has arrived
        for &u in &r.fronthaul_utilization_bps[1..] {
            assert_eq!(u, r.fronthaul_requirement_bps as f64);
        }
    }
}

#[test]
fn qpsk_cell_capacity_is_below_offered_load() {
    // 266 PRB × 12 subcarriers × 13 data symbols × 2 bits × 602/1024 per
    // slot, 2000 slots per second
    let oracle = 266.0 * 12.0 * 13.0 * 2.0 * 602.0 / 1024.0 * 2000.0;
    let rate = peak_cell_rate_bps(&cfg(ModOrder::Qpsk, 30.0, 1)).unwrap();
    assert!((rate - oracle).abs() < 1.0, "{rate} vs {oracle}");
    assert!((rate - 97.6e6).abs() < 0.1e6);
    assert!(rate < 4.0 * 30e6);

    let r = run(&cfg(ModOrder::Qpsk, 30.0, 1)).unwrap().report;
    assert!(r.delivered_ratio() < 0.95, "{}", r.delivered_ratio());
    assert!(conserved(&r));
}

#[test]
fn cap_down_to_64qam_is_negligible_at_low_load() {
    let hi = run(&cfg(ModOrder::Qam256, 10.0, 1)).unwrap().report;
    let lo = run(&cfg(ModOrder::Qam64, 10.0, 1)).unwrap().report;
    assert!(lo.mean_throughput_bps >= 0.95 * hi.mean_throughput_bps);
    assert!(hi.delivered_ratio() >= 0.99 && lo.delivered_ratio() >= 0.99);
}

#[test]
fn throughput_is_monotone_in_the_cap() {
    let thr: Vec<f64> =
        ModOrder::ALL.iter().map(|&cap| run(&cfg(cap, 30.0, 1)).unwrap().report.mean_throughput_bps).collect();
    assert!(thr.windows(2).all(|w| w[0] <= w[1]), "{thr:?}");
}

#[test]
fn higher_numerology_cuts_delay() {
    let d0 = run(&cfg(ModOrder::Qam256, 10.0, 0)).unwrap().report.median_delay_s.unwrap();
    let d2 = run(&cfg(ModOrder::Qam256, 10.0, 2)).unwrap().report.median_delay_s.unwrap();
    assert!(d2 < d0, "{d2} vs {d0}");
}

#[test]
fn config_roundtrips_through_toml() {
    let c = cfg(ModOrder::Qam16, 20.0, 2);
    assert_eq!(ScenarioConfig::from_toml(&c.to_toml()).unwrap(), c);
    assert!(ScenarioConfig::from_toml("n_sites = 7\nbogus = 1\n").is_err());
    assert!(ScenarioConfig::from_toml("numerology = 5\n").is_err());
}
