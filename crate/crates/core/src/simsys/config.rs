use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iq_core::{ModOrder, Numerology};

/// Line-of-sight state used for every link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LosMode {
    /// Drawn per link from the UMi LOS probability.
    #[default]
    Random,
    AlwaysLos,
    AlwaysNlos,
}

/// Switches for the channel abstraction; the defaults give the full model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelOptions {
    pub shadowing: bool,
    pub fading: bool,
    /// Fixed interferer beam gain instead of a uniform draw.
    pub interferer_gain_db: Option<f64>,
    pub los: LosMode,
}

impl Default for ChannelOptions {
    fn default() -> Self {
        ChannelOptions {
            shadowing: true,
            fading: true,
            interferer_gain_db: None,
            los: LosMode::Random,
        }
    }
}

/// Deployment, traffic and run parameters of one simulation.
///
/// Defaults describe a 7-site, 21-cell urban micro deployment with four
/// 10 Mbit/s CBR users per cell over 100 MHz reuse-3 subbands at 30 kHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub n_sites: u32,
    pub cells_per_site: u32,
    pub isd_m: f64,
    pub ru_height_m: f64,
    pub ue_height_m: f64,
    pub tx_power_dbm: f64,
    pub carrier_hz: f64,
    pub subband_bandwidth_hz: f64,
    pub overhead: f64,
    pub numerology: u8,
    pub layers: u32,
    pub noise_figure_db: f64,
    pub ues_per_cell: u32,
    /// UEs are not dropped closer than this to their RU.
    pub min_distance_m: f64,
    pub mod_cap: ModOrder,
    pub offered_load_per_ue_bps: f64,
    pub packet_size_bytes: u32,
    pub sim_duration_s: f64,
    /// After traffic stops, scheduling continues at most this long so that
    /// packets already queued can still be delivered.
    pub drain_time_s: f64,
    pub channel_update_period_s: f64,
    pub harq_max_tx: u32,
    pub harq_retx_delay_slots: u32,
    /// Share of slots used for downlink.
    pub dl_fraction: f64,
    pub rng_seed: u64,
    pub channel: ChannelOptions,
    /// Replaces the link-level error model by a constant block error
    /// probability.
    pub forced_bler: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            n_sites: 7,
            cells_per_site: 3,
            isd_m: 200.0,
            ru_height_m: 10.0,
            ue_height_m: 1.5,
            tx_power_dbm: 30.0,
            carrier_hz: 2e9,
            subband_bandwidth_hz: 100e6,
            overhead: 0.04,
            numerology: 1,
            layers: 1,
            noise_figure_db: 9.0,
            ues_per_cell: 4,
            min_distance_m: 10.0,
            mod_cap: ModOrder::Qam256,
            offered_load_per_ue_bps: 10e6,
            packet_size_bytes: 600,
            sim_duration_s: 1.0,
            drain_time_s: 0.1,
            channel_update_period_s: 0.1,
            harq_max_tx: 4,
            harq_retx_delay_slots: 4,
            dl_fraction: 1.0,
            rng_seed: 1,
            channel: ChannelOptions::default(),
            forced_bler: None,
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml(src: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(src).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn numerology(&self) -> Numerology {
        Numerology::new(self.numerology).expect("validated")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        Numerology::new(self.numerology).map_err(|e| Error::Config(e.to_string()))?;
        if self.n_sites != 1 && self.n_sites != 7 {
            return bad(format!("n_sites must be 1 or 7, got {}", self.n_sites));
        }
        if self.cells_per_site != 3 {
            return bad(format!("cells_per_site must be 3, got {}", self.cells_per_site));
        }
        for (name, v) in [
            ("isd_m", self.isd_m),
            ("ru_height_m", self.ru_height_m),
            ("ue_height_m", self.ue_height_m),
            ("carrier_hz", self.carrier_hz),
            ("subband_bandwidth_hz", self.subband_bandwidth_hz),
            ("sim_duration_s", self.sim_duration_s),
            ("channel_update_period_s", self.channel_update_period_s),
            ("dl_fraction", self.dl_fraction),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        for (name, v) in [
            ("offered_load_per_ue_bps", self.offered_load_per_ue_bps),
            ("drain_time_s", self.drain_time_s),
            ("min_distance_m", self.min_distance_m),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return bad(format!("{name} must be non-negative, got {v}"));
            }
        }
        if self.min_distance_m >= self.isd_m / 3f64.sqrt() {
            return bad("min_distance_m must be smaller than the cell radius".into());
        }
        if !(0.0..1.0).contains(&self.overhead) {
            return bad(format!("overhead must be in [0, 1), got {}", self.overhead));
        }
        if self.dl_fraction > 1.0 {
            return bad(format!("dl_fraction must be at most 1, got {}", self.dl_fraction));
        }
        if self.layers == 0 || self.packet_size_bytes == 0 || self.harq_max_tx == 0 {
            return bad("layers, packet_size_bytes and harq_max_tx must be at least 1".into());
        }
        if let Some(p) = self.forced_bler {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("forced_bler must be in [0, 1], got {p}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate_and_roundtrip() {
        let cfg = ScenarioConfig::default();
        cfg.validate().unwrap();
        assert_eq!(ScenarioConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn partial_file_uses_defaults() {
        let cfg = ScenarioConfig::from_toml("numerology = 2\nmod_cap = \"qpsk\"\n[channel]\nfading = false\n").unwrap();
        assert_eq!(cfg.numerology, 2);
        assert_eq!(cfg.mod_cap, ModOrder::Qpsk);
        assert!(!cfg.channel.fading);
        assert_eq!(cfg.isd_m, 200.0);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(ScenarioConfig::from_toml("numerolgy = 1\n").is_err());
        assert!(ScenarioConfig::from_toml("numerology = 3\n").is_err());
        assert!(ScenarioConfig::from_toml("mod_cap = \"1024qam\"\n").is_err());
        assert!(ScenarioConfig::from_toml("sim_duration_s = 0.0\n").is_err());
        assert!(ScenarioConfig::from_toml("forced_bler = 1.5\n").is_err());
        assert!(ScenarioConfig::from_toml("[channel]\nlos = \"sometimes\"\n").is_err());
    }
}
