//! Multi-cell downlink system simulator with a modulation cap, used to
//! weigh fronthaul savings from modulation compression against air
//! interface throughput and delay.

mod channel;
mod config;
mod engine;
mod mcs;

pub use channel::{
    hex_cells, los_probability, noise_power_dbm, path_loss_db, Cell, ChannelState, Link, Scenario, Ue,
    MIN_INTERFERER_GAIN_DB, SERVING_BEAM_GAIN_DB, SHADOWING_SIGMA_LOS_DB, SHADOWING_SIGMA_NLOS_DB,
};
pub use config::{ChannelOptions, LosMode, ScenarioConfig};
pub use engine::{
    fronthaul_utilization, peak_cell_rate_bps, run, run_scenario, KpiReport, PacketRecord, RunOutput, ScheduleLog,
    WidthPolicy, WindowUsage, UTILIZATION_WINDOW_S,
};
pub use mcs::{
    bits_per_prb, bler, bler_midpoint_db, prbs_for_bits, select_mcs, transport_block_size, McsEntry, BLER_MARGIN_DB,
    BLER_SLOPE_PER_DB, DATA_SYMBOLS_PER_SLOT, MCS_TABLE_2, TARGET_BLER,
};
