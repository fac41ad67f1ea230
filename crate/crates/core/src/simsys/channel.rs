//! Deployment layout and the channel abstraction: UMi street-canyon path
//! loss, per-UE log-normal shadowing, block Rayleigh fading and random beam
//! gains.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::config::{LosMode, ScenarioConfig};
use crate::error::{Error, Result};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;
const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;
/// Serving beam gain of a 64-element array steered at its UE.
pub const SERVING_BEAM_GAIN_DB: f64 = 18.061_799_739_838_87;
/// Lower end of the interferer beam gain draw; the upper end is the serving
/// gain.
pub const MIN_INTERFERER_GAIN_DB: f64 = -10.0;
pub const SHADOWING_SIGMA_LOS_DB: f64 = 4.0;
pub const SHADOWING_SIGMA_NLOS_DB: f64 = 7.82;

// RNG stream ids; channel period p uses stream p + 1
pub(crate) const LAYOUT_STREAM: u64 = 0;
pub(crate) const TRAFFIC_STREAM: u64 = (1 << 32) - 1;
pub(crate) const UE_STREAM_BASE: u64 = 1 << 32;

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// UMi LOS probability at 2D distance `d2d`.
pub fn los_probability(d2d: f64) -> f64 {
    if d2d <= 18.0 {
        1.0
    } else {
        18.0 / d2d + (-d2d / 36.0).exp() * (1.0 - 18.0 / d2d)
    }
}

/// UMi street-canyon path loss in dB.
pub fn path_loss_db(d2d: f64, los: bool, h_bs: f64, h_ut: f64, fc_hz: f64) -> f64 {
    let d3d = (d2d * d2d + (h_bs - h_ut).powi(2)).sqrt();
    let fc_ghz = fc_hz / 1e9;
    let d_bp = 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * fc_hz / SPEED_OF_LIGHT;
    let pl_los = if d2d <= d_bp {
        32.4 + 21.0 * d3d.log10() + 20.0 * fc_ghz.log10()
    } else {
        32.4 + 40.0 * d3d.log10() + 20.0 * fc_ghz.log10() - 9.5 * (d_bp * d_bp + (h_bs - h_ut).powi(2)).log10()
    };
    if los {
        pl_los
    } else {
        let pl_nlos = 35.3 * d3d.log10() + 22.4 + 21.3 * fc_ghz.log10() - 0.3 * (h_ut - 1.5);
        pl_los.max(pl_nlos)
    }
}

pub fn noise_power_dbm(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    THERMAL_NOISE_DBM_PER_HZ + 10.0 * bandwidth_hz.log10() + noise_figure_db
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub site: usize,
    pub position: (f64, f64),
    pub subband: usize,
    /// Sector boresight, radians.
    pub azimuth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ue {
    pub position: (f64, f64),
    pub cell: usize,
}

/// Large-scale gain between a UE and one co-subband cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub cell: usize,
    pub los: bool,
    /// −(path loss + shadowing), dB.
    pub path_gain_db: f64,
}

/// Static part of a deployment: cells, UEs and their large-scale links.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub cells: Vec<Cell>,
    pub ues: Vec<Ue>,
    /// Per UE, the serving link first, then every other cell on the same
    /// subband in cell order.
    pub links: Vec<Vec<Link>>,
}

fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Hexagonal sites with three 120° sectors each; sector `k` of every site
/// uses subband `k`.
pub fn hex_cells(n_sites: u32, isd: f64) -> Vec<Cell> {
    let mut sites = vec![(0.0, 0.0)];
    if n_sites == 7 {
        for k in 0..6 {
            let a = (30.0 + 60.0 * f64::from(k)).to_radians();
            sites.push((isd * a.cos(), isd * a.sin()));
        }
    }
    sites
        .iter()
        .enumerate()
        .flat_map(|(site, &position)| {
            (0..3).map(move |k| Cell {
                site,
                position,
                subband: k,
                azimuth: (30.0 + 120.0 * k as f64).to_radians(),
            })
        })
        .collect()
}

/// Redraws of a UE position before giving up on finding a spot where its
/// own cell is the strongest on the subband.
const MAX_DROP_ATTEMPTS: usize = 1000;

fn draw_links(cfg: &ScenarioConfig, cells: &[Cell], ue: &Ue, rng: &mut ChaCha8Rng) -> Vec<Link> {
    let serving = ue.cell;
    let subband = cells[serving].subband;
    let mut links: Vec<Link> = std::iter::once(serving)
        .chain((0..cells.len()).filter(|&c| c != serving && cells[c].subband == subband))
        .map(|c| {
            let d2d = distance(ue.position, cells[c].position).max(1.0);
            // drawn even when overridden so the switches don't shift the stream
            let los_draw: f64 = rng.random();
            let los = match cfg.channel.los {
                LosMode::Random => los_draw < los_probability(d2d),
                LosMode::AlwaysLos => true,
                LosMode::AlwaysNlos => false,
            };
            Link {
                cell: c,
                los,
                path_gain_db: -path_loss_db(d2d, los, cfg.ru_height_m, cfg.ue_height_m, cfg.carrier_hz),
            }
        })
        .collect();
    // one shadowing value per UE, with the spread of its serving link
    let sigma = if links[0].los { SHADOWING_SIGMA_LOS_DB } else { SHADOWING_SIGMA_NLOS_DB };
    let shadow_draw: f64 = StandardNormal.sample(rng);
    if cfg.channel.shadowing {
        for l in &mut links {
            l.path_gain_db -= sigma * shadow_draw;
        }
    }
    links
}

impl Scenario {
    /// Builds the hexagonal deployment and drops `ues_per_cell` UEs
    /// uniformly over each cell's area: the part of its sector (±60° around
    /// boresight, out to the site radius) where it is the strongest cell on
    /// its subband.
    pub fn build(cfg: &ScenarioConfig) -> Result<Self> {
        cfg.validate()?;
        let cells = hex_cells(cfg.n_sites, cfg.isd_m);
        let mut rng = stream_rng(cfg.rng_seed, LAYOUT_STREAM);
        let r_max = cfg.isd_m / 3f64.sqrt();
        let r_min = cfg.min_distance_m;
        let mut ues = Vec::new();
        let mut links = Vec::new();
        for (c, cell) in cells.iter().enumerate() {
            for _ in 0..cfg.ues_per_cell {
                for attempt in 1..=MAX_DROP_ATTEMPTS {
                    let r = (rng.random::<f64>() * (r_max * r_max - r_min * r_min) + r_min * r_min).sqrt();
                    let a = cell.azimuth + (rng.random::<f64>() - 0.5) * 120f64.to_radians();
                    let ue = Ue {
                        position: (cell.position.0 + r * a.cos(), cell.position.1 + r * a.sin()),
                        cell: c,
                    };
                    let l = draw_links(cfg, &cells, &ue, &mut rng);
                    let best = l[1..].iter().all(|o| o.path_gain_db <= l[0].path_gain_db);
                    if best || attempt == MAX_DROP_ATTEMPTS {
                        ues.push(ue);
                        links.push(l);
                        break;
                    }
                }
            }
        }
        Ok(Scenario {
            config: cfg.clone(),
            cells,
            ues,
            links,
        })
    }

    /// Uses a caller-provided layout as is; LOS states and shadowing are
    /// still drawn from the configured seed.
    pub fn from_layout(cfg: &ScenarioConfig, cells: Vec<Cell>, ues: Vec<Ue>) -> Result<Self> {
        cfg.validate()?;
        if let Some(u) = ues.iter().find(|u| u.cell >= cells.len()) {
            return Err(Error::invalid(format!("UE attached to missing cell {}", u.cell)));
        }
        let mut rng = stream_rng(cfg.rng_seed, LAYOUT_STREAM);
        let links = ues.iter().map(|ue| draw_links(cfg, &cells, ue, &mut rng)).collect();
        Ok(Scenario {
            config: cfg.clone(),
            cells,
            ues,
            links,
        })
    }

    /// Index of the channel period containing `slot`.
    pub fn period_of_slot(&self, slot: u64) -> u64 {
        let t = slot as f64 * self.config.numerology().slot_duration_s();
        (t / self.config.channel_update_period_s + 1e-9).floor() as u64
    }

    /// SINR of `ue` during `slot`.
    pub fn sinr(&self, ue: usize, slot: u64) -> f64 {
        ChannelState::draw(self, self.period_of_slot(slot)).sinr_db[ue]
    }
}

/// Small-scale state of one channel period, constant within the period.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    /// Per UE, linear power fading for each entry of `Scenario::links`.
    pub fading: Vec<Vec<f64>>,
    /// Per UE, beam gain of each link (the serving gain first).
    pub beam_gain_db: Vec<Vec<f64>>,
    pub sinr_db: Vec<f64>,
}

impl ChannelState {
    pub fn draw(scenario: &Scenario, period: u64) -> Self {
        let cfg = &scenario.config;
        let mut rng = stream_rng(cfg.rng_seed, period + 1);
        let noise_mw = 10f64.powf(noise_power_dbm(cfg.subband_bandwidth_hz, cfg.noise_figure_db) / 10.0);
        let mut fading = Vec::with_capacity(scenario.ues.len());
        let mut beam_gain_db = Vec::with_capacity(scenario.ues.len());
        let mut sinr_db = Vec::with_capacity(scenario.ues.len());
        for links in &scenario.links {
            let f: Vec<f64> = links
                .iter()
                .map(|_| {
                    let h: f64 = Exp1.sample(&mut rng);
                    if cfg.channel.fading {
                        h
                    } else {
                        1.0
                    }
                })
                .collect();
            let g: Vec<f64> = links
                .iter()
                .enumerate()
                .map(|(k, _)| {
                    if k == 0 {
                        return SERVING_BEAM_GAIN_DB;
                    }
                    let draw = rng.random_range(MIN_INTERFERER_GAIN_DB..SERVING_BEAM_GAIN_DB);
                    cfg.channel.interferer_gain_db.unwrap_or(draw)
                })
                .collect();
            let rx_mw = |k: usize| 10f64.powf((cfg.tx_power_dbm + g[k] + links[k].path_gain_db) / 10.0) * f[k];
            let interference: f64 = (1..links.len()).map(rx_mw).sum();
            sinr_db.push(10.0 * (rx_mw(0) / (noise_mw + interference)).log10());
            fading.push(f);
            beam_gain_db.push(g);
        }
        ChannelState {
            fading,
            beam_gain_db,
            sinr_db,
        }
    }
}
