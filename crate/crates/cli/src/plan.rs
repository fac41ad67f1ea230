use std::fmt::Write as _;
use std::path::Path;

use fhkit::capacity::{plan_report, CapacityValue, PlanConfig, PlanReport};
use fhkit::{Exact, RateScalar};

use crate::error::{read_config, CliError, CliResult};
use crate::output::{resolve, write_atomic};

pub const CSV_HEADER: [&str; 7] = ["kind", "item", "dl_bps", "ul_bps", "latency", "total_bps", "reduction_percent"];

pub struct PlanArgs<'a> {
    pub config: Option<&'a Path>,
    pub preset: Option<&'a str>,
    pub out: Option<&'a Path>,
}

pub fn load(args: &PlanArgs) -> CliResult<PlanConfig> {
    match (args.config, args.preset) {
        (Some(path), None) => PlanConfig::from_toml(&read_config(path)?).map_err(CliError::config),
        (None, Some(name)) => PlanConfig::preset(name).map_err(CliError::config),
        _ => Err(CliError::Usage("plan needs exactly one of --config or --preset".into())),
    }
}

pub fn run(args: &PlanArgs) -> CliResult<String> {
    let cfg = load(args)?;
    let report = plan_report(&cfg).map_err(CliError::config)?;
    if let Some(out) = args.out {
        write_atomic(&resolve(Some(out), "plan.csv"), &csv_bytes(&report)?)?;
    }
    Ok(render(&cfg, &report))
}

/// Exact bit rates are printed as integers when whole, otherwise with three
/// decimals.
fn bps_text(v: &Exact) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{:.3}", v.as_f64())
    }
}

fn human(bps: f64) -> String {
    if bps >= 1e9 {
        format!("{:.3} Gbps", bps / 1e9)
    } else {
        format!("{:.3} Mbps", bps / 1e6)
    }
}

fn cap_text(v: &CapacityValue<Exact>, exact: bool) -> String {
    match v {
        CapacityValue::Bps(b) if exact => bps_text(b),
        CapacityValue::Bps(b) => human(b.as_f64()),
        CapacityValue::NotApplicable => "-".into(),
    }
}

pub fn render(cfg: &PlanConfig, report: &PlanReport) -> String {
    let mut s = String::new();
    if !report.splits.is_empty() {
        let _ = writeln!(s, "{:<12} {:>16} {:>16}  {}", "split", "DL", "UL", "one-way latency");
        for row in &report.splits {
            let _ = writeln!(
                s,
                "{:<12} {:>16} {:>16}  {}",
                row.option.to_string(),
                cap_text(&row.dl, false),
                cap_text(&row.ul, false),
                row.latency
            );
        }
    }
    if !report.modcomp.is_empty() {
        if !s.is_empty() {
            s.push('\n');
        }
        let _ = writeln!(s, "Option 7-2x with modulation compression");
        let _ = writeln!(s, "{:>4} {:>16} {:>16} {:>8} {:>10}", "W", "per RU", "all RUs", "ratio", "reduction");
        for row in &report.modcomp {
            let total = row.total_bps.map_or_else(|| "-".to_string(), |t| human(t as f64));
            let _ = writeln!(
                s,
                "{:>4} {:>16} {:>16} {:>8.4} {:>9.2}%",
                row.bitwidth,
                human(row.per_ru_bps as f64),
                total,
                row.ratio,
                row.reduction_percent
            );
        }
    }
    let _ = writeln!(s, "\n# effective configuration\n{}", cfg.to_toml().trim_end());
    s
}

pub fn csv_bytes(report: &PlanReport) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Internal(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(fail)?;
    for row in &report.splits {
        let latency = row.latency.to_string();
        w.write_record([
            "split",
            row.option.name(),
            &cap_text(&row.dl, true),
            &cap_text(&row.ul, true),
            &latency,
            "",
            "",
        ])
        .map_err(fail)?;
    }
    for row in &report.modcomp {
        w.write_record([
            "modcomp".to_string(),
            format!("W={}", row.bitwidth),
            row.per_ru_bps.to_string(),
            String::new(),
            String::new(),
            row.total_bps.map(|t| t.to_string()).unwrap_or_default(),
            format!("{}", row.reduction_percent),
        ])
        .map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Internal(format!("csv: {e}")))
}
