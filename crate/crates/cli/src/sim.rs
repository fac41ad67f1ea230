use std::fmt::Write as _;
use std::path::Path;

use fhkit::iq_core::ModOrder;
use fhkit::simsys::{run as run_scenario, RunOutput, ScenarioConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{read_config, CliError, CliResult};
use crate::output::{resolve, write_atomic};

/// Frozen column order of the sweep file.
pub const CSV_HEADER: [&str; 7] =
    ["cap", "load", "numerology", "mean_throughput", "median_delay", "fh_requirement", "fh_utilization_mean"];

pub const TRACE_HEADER: [&str; 6] = ["cap", "load", "numerology", "ue", "arrival", "delay"];

/// Operating points below this delivered/offered ratio are flagged.
pub const SATURATION_RATIO: f64 = 0.95;

/// Axes of a sweep. Missing axes take the single value of the base scenario.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub caps: Option<Vec<ModOrder>>,
    pub loads_mbps: Option<Vec<f64>>,
    pub numerologies: Option<Vec<u8>>,
}

impl Sweep {
    pub fn from_toml(src: &str) -> CliResult<Self> {
        toml::from_str(src).map_err(|e| CliError::Usage(format!("invalid sweep: {e}")))
    }

    /// Every combination, caps varying fastest, then loads, then numerologies.
    pub fn points(&self, base: &ScenarioConfig) -> CliResult<Vec<ScenarioConfig>> {
        let caps = self.caps.clone().unwrap_or_else(|| vec![base.mod_cap]);
        let loads = self.loads_mbps.clone().unwrap_or_else(|| vec![base.offered_load_per_ue_bps / 1e6]);
        let mus = self.numerologies.clone().unwrap_or_else(|| vec![base.numerology]);
        if caps.is_empty() || loads.is_empty() || mus.is_empty() {
            return Err(CliError::Usage("sweep axes must not be empty".into()));
        }
        let mut points = Vec::with_capacity(caps.len() * loads.len() * mus.len());
        for &mu in &mus {
            for &load in &loads {
                for &cap in &caps {
                    let cfg = ScenarioConfig {
                        mod_cap: cap,
                        offered_load_per_ue_bps: load * 1e6,
                        numerology: mu,
                        ..base.clone()
                    };
                    cfg.validate().map_err(|e| {
                        CliError::Usage(format!("sweep point cap={cap} load={load} Mbps μ={mu}: {e}"))
                    })?;
                    points.push(cfg);
                }
            }
        }
        Ok(points)
    }
}

pub struct SimArgs<'a> {
    pub config: Option<&'a Path>,
    pub sweep: Option<&'a Path>,
    pub seed: Option<u64>,
    pub out: Option<&'a Path>,
    pub trace: Option<&'a Path>,
}

pub fn load(args: &SimArgs) -> CliResult<(ScenarioConfig, Sweep)> {
    let mut base = match args.config {
        Some(path) => ScenarioConfig::from_toml(&read_config(path)?).map_err(CliError::config)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        base.rng_seed = seed;
    }
    let sweep = match args.sweep {
        Some(path) => Sweep::from_toml(&read_config(path)?)?,
        None => Sweep::default(),
    };
    Ok((base, sweep))
}

pub fn run(args: &SimArgs) -> CliResult<String> {
    let (base, sweep) = load(args)?;
    let points = sweep.points(&base)?;
    let outputs: Vec<RunOutput> = points
        .par_iter()
        .map(|cfg| run_scenario(cfg).map_err(|e| CliError::Internal(e.to_string())))
        .collect::<CliResult<_>>()?;
    for (cfg, out) in points.iter().zip(&outputs) {
        let r = &out.report;
        if r.delivered_bytes + r.dropped_bytes + r.in_flight_bytes != r.offered_bytes {
            return Err(CliError::Internal(format!(
                "byte conservation violated at cap={} load={}",
                cfg.mod_cap, cfg.offered_load_per_ue_bps
            )));
        }
    }

    let csv = sweep_csv(&points, &outputs)?;
    write_atomic(&resolve(args.out, "sweep.csv"), &csv)?;
    if let Some(trace) = args.trace {
        write_atomic(&resolve(Some(trace), "trace.csv"), &trace_csv(&points, &outputs)?)?;
    }
    Ok(summary(&base, &sweep, &points, &outputs))
}

fn csv_error(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(format!("csv: {e}"))
}

pub fn sweep_csv(points: &[ScenarioConfig], outputs: &[RunOutput]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).map_err(csv_error)?;
    for (cfg, out) in points.iter().zip(outputs) {
        let r = &out.report;
        w.write_record([
            cfg.mod_cap.name().to_string(),
            cfg.offered_load_per_ue_bps.to_string(),
            cfg.numerology.to_string(),
            r.mean_throughput_bps.to_string(),
            r.median_delay_s.map(|d| d.to_string()).unwrap_or_default(),
            r.fronthaul_requirement_bps.to_string(),
            r.fronthaul_utilization_mean().to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.into_inner().map_err(csv_error)
}

fn trace_csv(points: &[ScenarioConfig], outputs: &[RunOutput]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRACE_HEADER).map_err(csv_error)?;
    for (cfg, out) in points.iter().zip(outputs) {
        for p in &out.packets {
            w.write_record([
                cfg.mod_cap.name().to_string(),
                cfg.offered_load_per_ue_bps.to_string(),
                cfg.numerology.to_string(),
                p.ue.to_string(),
                p.arrival_s.to_string(),
                p.delay_s.to_string(),
            ])
            .map_err(csv_error)?;
        }
    }
    w.into_inner().map_err(csv_error)
}

fn summary(base: &ScenarioConfig, sweep: &Sweep, points: &[ScenarioConfig], outputs: &[RunOutput]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>7} {:>10} {:>3} {:>14} {:>12} {:>9} {:>12} {:>12}",
        "cap", "load Mbps", "μ", "thr Mbps/UE", "median ms", "deliv.", "FH req Gbps", "FH use Gbps"
    );
    for (cfg, out) in points.iter().zip(outputs) {
        let r = &out.report;
        let delay = r.median_delay_s.map_or_else(|| "-".to_string(), |d| format!("{:.3}", d * 1e3));
        let flag = if r.delivered_ratio() < SATURATION_RATIO { "  SATURATED" } else { "" };
        let _ = writeln!(
            s,
            "{:>7} {:>10} {:>3} {:>14.3} {:>12} {:>9.4} {:>12.3} {:>12.3}{flag}",
            cfg.mod_cap.name(),
            cfg.offered_load_per_ue_bps / 1e6,
            cfg.numerology,
            r.mean_throughput_bps / 1e6,
            delay,
            r.delivered_ratio(),
            r.fronthaul_requirement_bps as f64 / 1e9,
            r.fronthaul_utilization_mean() / 1e9,
        );
    }
    let _ = writeln!(s, "\n# effective scenario\n{}", base.to_toml().trim_end());
    let sweep_text = toml::to_string(sweep).expect("sweep serializes");
    if !sweep_text.trim().is_empty() {
        let _ = writeln!(s, "\n# sweep\n{}", sweep_text.trim_end());
    }
    s
}
