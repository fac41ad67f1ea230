//! Transport capacity and latency requirements of the functional split
//! options, and modulation-compression-aware 7-2x dimensioning.

mod modcomp;
mod plan;
mod split;

pub use modcomp::{
    modcomp_capacity, reduction_percent, scenario_fronthaul_capacity, MODCOMP_BITWIDTHS, UNCOMPRESSED_BITWIDTH,
};
pub use plan::{plan_report, preset_source, ModCompPlan, ModCompRow, PlanConfig, PlanReport, SplitRow, PRESETS};
pub use split::{
    latency_requirement, required_capacity, CapacityValue, Direction, LatencyBound, SplitOption, SplitParams,
    SPLIT_PARAM_FIELDS,
};
