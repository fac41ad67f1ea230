//! Slot-by-slot downlink engine: CBR arrivals, link adaptation, equal-share
//! round-robin scheduling, HARQ with incremental redundancy and in-order
//! delivery.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::channel::{stream_rng, ChannelState, Scenario, TRAFFIC_STREAM, UE_STREAM_BASE};
use super::config::ScenarioConfig;
use super::mcs::{
    bler, bits_per_prb, prbs_for_bits, select_mcs, transport_block_size, McsEntry, MCS_TABLE_2, TARGET_BLER,
};
use crate::capacity::{modcomp_capacity, scenario_fronthaul_capacity};
use crate::error::Result;
use crate::iq_core::{prb_count, SUBCARRIERS_PER_PRB, SYMBOLS_PER_SLOT};

/// Width of one fronthaul utilization window.
pub const UTILIZATION_WINDOW_S: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KpiReport {
    /// Mean over UEs of delivered bits / simulated traffic time.
    pub mean_throughput_bps: f64,
    /// Median per-packet delay of delivered packets.
    pub median_delay_s: Option<f64>,
    pub offered_bytes: u64,
    pub delivered_bytes: u64,
    pub dropped_bytes: u64,
    pub in_flight_bytes: u64,
    pub delivered_packets: u64,
    /// Static 7-2x requirement of all RUs at the bitwidth of the cap.
    pub fronthaul_requirement_bps: u64,
    /// Fronthaul rate per 1 ms window at the bitwidth of the cap.
    pub fronthaul_utilization_bps: Vec<f64>,
    pub n_cells: usize,
    pub n_ues: usize,
    pub simulated_slots: u64,
}

impl KpiReport {
    pub fn delivered_ratio(&self) -> f64 {
        if self.offered_bytes == 0 {
            1.0
        } else {
            self.delivered_bytes as f64 / self.offered_bytes as f64
        }
    }

    pub fn fronthaul_utilization_mean(&self) -> f64 {
        if self.fronthaul_utilization_bps.is_empty() {
            0.0
        } else {
            self.fronthaul_utilization_bps.iter().sum::<f64>() / self.fronthaul_utilization_bps.len() as f64
        }
    }
}

/// Scheduled resources of one RU in one utilization window.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WindowUsage {
    /// Σ allocated PRBs × OFDM symbols × layers.
    pub prb_symbols: u64,
    /// Bits per symbol of the highest modulation scheduled, 0 if idle.
    pub max_bits: u32,
}

/// Per-window, per-RU schedule summary kept for fronthaul accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleLog {
    pub windows: Vec<Vec<WindowUsage>>,
}

/// IQ bitwidth assumed when converting a schedule to fronthaul rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthPolicy {
    Fixed(u32),
    /// Width of the highest modulation each RU scheduled in the window.
    MaxScheduled,
}

pub fn fronthaul_utilization(log: &ScheduleLog, policy: WidthPolicy) -> Vec<f64> {
    log.windows
        .iter()
        .map(|cells| {
            let bits: u64 = cells
                .iter()
                .map(|u| {
                    let w = match policy {
                        WidthPolicy::Fixed(w) => w,
                        WidthPolicy::MaxScheduled => u.max_bits,
                    };
                    SUBCARRIERS_PER_PRB as u64 * u.prb_symbols * u64::from(w)
                })
                .sum();
            bits as f64 / UTILIZATION_WINDOW_S
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacketRecord {
    pub ue: usize,
    pub arrival_s: f64,
    pub delay_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub report: KpiReport,
    pub schedule: ScheduleLog,
    /// Delivered packets in delivery order.
    pub packets: Vec<PacketRecord>,
}

#[derive(Debug, Clone)]
struct Packet {
    arrival: f64,
    pending_segments: u32,
    fully_segmented: bool,
    lost: bool,
}

struct UeState {
    cell: usize,
    interval: f64,
    next_arrival: f64,
    packets: Vec<Packet>,
    /// Segmentation cursor: packet index and bytes already taken from it.
    send_idx: usize,
    send_offset: u32,
    deliver_idx: usize,
    backlog_bytes: u64,
    delivered_bytes: u64,
    dropped_bytes: u64,
    rng: ChaCha8Rng,
}

struct TransportBlock {
    ue: usize,
    segments: Vec<(u32, u32)>,
    n_prb: u32,
    mcs: &'static McsEntry,
    tx_count: u32,
    /// Σ linear SINR over the transmissions so far; with an unchanged
    /// channel the k-th attempt sees SINR + 10·log10(k).
    combined_sinr: f64,
    due_slot: u64,
}

/// Builds the deployment for `cfg` and simulates it.
pub fn run(cfg: &ScenarioConfig) -> Result<RunOutput> {
    run_scenario(&Scenario::build(cfg)?)
}

pub fn run_scenario(scenario: &Scenario) -> Result<RunOutput> {
    let cfg = &scenario.config;
    let numerology = cfg.numerology();
    let slot_s = numerology.slot_duration_s();
    let n_prb = prb_count(cfg.subband_bandwidth_hz, numerology, cfg.overhead)?;
    let n_cells = scenario.cells.len();
    let packet_bytes = u64::from(cfg.packet_size_bytes);
    let traffic_end = cfg.sim_duration_s;
    let hard_end = cfg.sim_duration_s + cfg.drain_time_s;
    let n_windows = (cfg.sim_duration_s / UTILIZATION_WINDOW_S).round() as usize;
    let slots_per_window = (UTILIZATION_WINDOW_S / slot_s).round() as u64;
    let packet_bits = f64::from(cfg.packet_size_bytes) * 8.0;

    let mut traffic_rng = stream_rng(cfg.rng_seed, TRAFFIC_STREAM);
    let mut ues: Vec<UeState> = scenario
        .ues
        .iter()
        .enumerate()
        .map(|(u, ue)| {
            let interval = if cfg.offered_load_per_ue_bps > 0.0 {
                packet_bits / cfg.offered_load_per_ue_bps
            } else {
                f64::INFINITY
            };
            let offset = if interval.is_finite() { traffic_rng.random::<f64>() * interval } else { f64::INFINITY };
            UeState {
                cell: ue.cell,
                interval,
                next_arrival: offset,
                packets: Vec::new(),
                send_idx: 0,
                send_offset: 0,
                deliver_idx: 0,
                backlog_bytes: 0,
                delivered_bytes: 0,
                dropped_bytes: 0,
                rng: stream_rng(cfg.rng_seed, UE_STREAM_BASE + u as u64),
            }
        })
        .collect();
    let cell_ues: Vec<Vec<usize>> =
        (0..n_cells).map(|c| (0..ues.len()).filter(|&u| ues[u].cell == c).collect()).collect();

    let mut harq: Vec<Vec<TransportBlock>> = (0..n_cells).map(|_| Vec::new()).collect();
    let mut windows = vec![vec![WindowUsage::default(); n_cells]; n_windows];
    let mut records = Vec::new();
    let mut period = u64::MAX;
    let mut channel: Option<ChannelState> = None;
    let mut mcs_of: Vec<&'static McsEntry> = vec![&MCS_TABLE_2[0]; ues.len()];
    let mut in_range: Vec<bool> = vec![true; ues.len()];

    let mut slot: u64 = 0;
    loop {
        let t0 = slot as f64 * slot_s;
        let t_end = t0 + slot_s;
        if t0 >= hard_end - 1e-12 {
            break;
        }
        if t0 >= traffic_end - 1e-12
            && harq.iter().all(Vec::is_empty)
            && ues.iter().all(|u| {
                u.backlog_bytes == 0 && u.deliver_idx == u.packets.len() && u.next_arrival >= traffic_end
            })
        {
            break;
        }
        let p = scenario.period_of_slot(slot);
        if p != period {
            period = p;
            let state = ChannelState::draw(scenario, p);
            for (u, m) in mcs_of.iter_mut().enumerate() {
                *m = select_mcs(state.sinr_db[u], cfg.mod_cap);
                // out of range: not even the lowest MCS meets the target,
                // so new data waits for a better channel period
                in_range[u] = cfg.forced_bler.is_some() || bler(state.sinr_db[u], &MCS_TABLE_2[0]) <= TARGET_BLER;
            }
            channel = Some(state);
        }
        let sinr = &channel.as_ref().expect("drawn above").sinr_db;

        for ue in ues.iter_mut() {
            while ue.next_arrival <= t0 + 1e-12 && ue.next_arrival < traffic_end {
                ue.packets.push(Packet {
                    arrival: ue.next_arrival,
                    pending_segments: 0,
                    fully_segmented: false,
                    lost: false,
                });
                ue.backlog_bytes += packet_bytes;
                ue.next_arrival = ue.interval.mul_add(ue.packets.len() as f64, ue.packets[0].arrival);
            }
        }

        // TDD: spread downlink slots evenly
        let dl = (((slot + 1) as f64 * cfg.dl_fraction).floor() - (slot as f64 * cfg.dl_fraction).floor()) >= 1.0;
        if !dl {
            slot += 1;
            continue;
        }

        let window = (slot / slots_per_window.max(1)) as usize;
        for c in 0..n_cells {
            let mut free = n_prb;
            let mut sent: Vec<TransportBlock> = Vec::new();

            // retransmissions first, oldest first
            let queue = std::mem::take(&mut harq[c]);
            for tb in queue {
                if tb.due_slot <= slot && tb.n_prb <= free {
                    free -= tb.n_prb;
                    sent.push(tb);
                } else {
                    harq[c].push(tb);
                }
            }

            // new data: equal shares, water-filled over the PRB needs
            let mut backlogged: Vec<(u32, usize, usize)> = cell_ues[c]
                .iter()
                .enumerate()
                .filter(|(_, &u)| ues[u].backlog_bytes > 0 && in_range[u])
                .map(|(k, &u)| {
                    let need = prbs_for_bits(mcs_of[u], ues[u].backlog_bytes * 8, cfg.layers);
                    let n = cell_ues[c].len();
                    (need, (k + n - (slot as usize % n)) % n, u)
                })
                .collect();
            backlogged.sort_unstable();
            let n_active = backlogged.len();
            for (i, &(need, _, u)) in backlogged.iter().enumerate() {
                if free == 0 {
                    break;
                }
                let share = free.div_ceil((n_active - i) as u32);
                let alloc = need.min(share);
                let mcs = mcs_of[u];
                let capacity_bytes = transport_block_size(mcs, alloc, numerology, cfg.layers) / 8;
                let payload = capacity_bytes.min(ues[u].backlog_bytes);
                if payload == 0 {
                    continue;
                }
                free -= alloc;
                let segments = take_segments(&mut ues[u], payload, cfg.packet_size_bytes);
                sent.push(TransportBlock {
                    ue: u,
                    segments,
                    n_prb: alloc,
                    mcs,
                    tx_count: 0,
                    combined_sinr: 0.0,
                    due_slot: slot,
                });
            }

            let used = n_prb - free;
            if window < n_windows && used > 0 {
                let w = &mut windows[window][c];
                w.prb_symbols += u64::from(used) * u64::from(SYMBOLS_PER_SLOT) * u64::from(cfg.layers);
                let top = sent.iter().map(|tb| tb.mcs.mod_order.bits_per_symbol()).max().unwrap_or(0);
                w.max_bits = w.max_bits.max(top);
            }

            for mut tb in sent {
                tb.tx_count += 1;
                let u = tb.ue;
                tb.combined_sinr += 10f64.powf(sinr[u] / 10.0);
                let p_err = match cfg.forced_bler {
                    Some(p) => p,
                    None => bler(10.0 * tb.combined_sinr.log10(), tb.mcs),
                };
                let ok = ues[u].rng.random::<f64>() >= p_err;
                if ok || tb.tx_count >= cfg.harq_max_tx {
                    let ue = &mut ues[u];
                    for &(pkt, _) in &tb.segments {
                        let p = &mut ue.packets[pkt as usize];
                        p.pending_segments -= 1;
                        p.lost |= !ok;
                    }
                    deliver_in_order(ue, u, t_end, packet_bytes, &mut records);
                } else {
                    tb.due_slot = slot + u64::from(cfg.harq_retx_delay_slots);
                    harq[c].push(tb);
                }
            }
        }
        slot += 1;
    }

    let offered_bytes: u64 = ues.iter().map(|u| u.packets.len() as u64 * packet_bytes).sum();
    let delivered_bytes: u64 = ues.iter().map(|u| u.delivered_bytes).sum();
    let dropped_bytes: u64 = ues.iter().map(|u| u.dropped_bytes).sum();
    let mean_throughput_bps = if ues.is_empty() {
        0.0
    } else {
        ues.iter().map(|u| u.delivered_bytes as f64 * 8.0 / cfg.sim_duration_s).sum::<f64>() / ues.len() as f64
    };
    let mut delays: Vec<f64> = records.iter().map(|r| r.delay_s).collect();
    let median_delay_s = median(&mut delays);

    let width = cfg.mod_cap.bits_per_symbol();
    let per_ru = modcomp_capacity(cfg.subband_bandwidth_hz, numerology, cfg.overhead, cfg.layers, width)?;
    let fronthaul_requirement_bps = scenario_fronthaul_capacity(n_cells as u32, per_ru)?;
    let schedule = ScheduleLog { windows };
    let fronthaul_utilization_bps = fronthaul_utilization(&schedule, WidthPolicy::Fixed(width));

    let report = KpiReport {
        mean_throughput_bps,
        median_delay_s,
        offered_bytes,
        delivered_bytes,
        dropped_bytes,
        in_flight_bytes: offered_bytes - delivered_bytes - dropped_bytes,
        delivered_packets: records.len() as u64,
        fronthaul_requirement_bps,
        fronthaul_utilization_bps,
        n_cells,
        n_ues: ues.len(),
        simulated_slots: slot,
    };
    Ok(RunOutput {
        report,
        schedule,
        packets: records,
    })
}

/// Pulls `bytes` off the front of the UE queue as (packet, length) segments.
fn take_segments(ue: &mut UeState, mut bytes: u64, packet_size: u32) -> Vec<(u32, u32)> {
    let mut segments = Vec::new();
    ue.backlog_bytes -= bytes;
    while bytes > 0 {
        let left = packet_size - ue.send_offset;
        let n = u64::from(left).min(bytes) as u32;
        let p = &mut ue.packets[ue.send_idx];
        p.pending_segments += 1;
        segments.push((ue.send_idx as u32, n));
        bytes -= u64::from(n);
        ue.send_offset += n;
        if ue.send_offset == packet_size {
            p.fully_segmented = true;
            ue.send_idx += 1;
            ue.send_offset = 0;
        }
    }
    segments
}

/// Releases every packet at the head of the queue whose segments have all
/// been resolved; a packet waiting behind an unresolved one is held back.
fn deliver_in_order(ue: &mut UeState, id: usize, now: f64, packet_bytes: u64, records: &mut Vec<PacketRecord>) {
    while let Some(p) = ue.packets.get(ue.deliver_idx) {
        if !p.fully_segmented || p.pending_segments > 0 {
            break;
        }
        if p.lost {
            ue.dropped_bytes += packet_bytes;
        } else {
            ue.delivered_bytes += packet_bytes;
            records.push(PacketRecord {
                ue: id,
                arrival_s: p.arrival,
                delay_s: now - p.arrival,
            });
        }
        ue.deliver_idx += 1;
    }
}

/// Middle element (lower middle for even counts); `None` when empty.
fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let k = (values.len() - 1) / 2;
    let (_, m, _) = values.select_nth_unstable_by(k, f64::total_cmp);
    Some(*m)
}

/// Per-PRB bit capacity at the top entry of a cap, for quick capacity
/// estimates.
pub fn peak_cell_rate_bps(cfg: &ScenarioConfig) -> Result<f64> {
    let numerology = cfg.numerology();
    let n_prb = prb_count(cfg.subband_bandwidth_hz, numerology, cfg.overhead)?;
    let top = MCS_TABLE_2.iter().rev().find(|e| e.mod_order <= cfg.mod_cap).expect("QPSK entries always qualify");
    Ok(f64::from(n_prb) * bits_per_prb(top, cfg.layers) * f64::from(numerology.slots_per_ms()) * 1000.0)
}
