//! Dimensioning plans: parameter files and the per-option report.

use std::collections::BTreeSet;

use num_rational::Ratio;
use toml::{Table, Value};

use super::modcomp::{modcomp_capacity, reduction_percent, scenario_fronthaul_capacity, UNCOMPRESSED_BITWIDTH};
use super::split::{
    latency_requirement, required_capacity, CapacityValue, Direction, LatencyBound, SplitOption, SplitParams,
};
use crate::error::{Error, Result};
use crate::iq_core::Numerology;
use crate::scalar::{parse_exact, RateScalar};

type Exact = Ratio<i128>;

/// Names of the built-in plans.
pub const PRESETS: [&str; 2] = ["table1-example", "nr-20mhz-mu1"];

/// Source text of a built-in plan.
pub fn preset_source(name: &str) -> Option<&'static str> {
    match name {
        "table1-example" => Some(include_str!("../../presets/table1-example.toml")),
        "nr-20mhz-mu1" => Some(include_str!("../../presets/nr-20mhz-mu1.toml")),
        _ => None,
    }
}

/// Modulation-compression section of a plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ModCompPlan {
    pub bandwidth_hz: f64,
    pub numerology: Numerology,
    pub overhead: f64,
    pub layers: u32,
    pub widths: Vec<u32>,
    /// When set, the report also gives the aggregate over this many RUs.
    pub n_ru: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanConfig {
    pub options: Vec<SplitOption>,
    pub dl: SplitParams<Exact>,
    pub ul: SplitParams<Exact>,
    pub modcomp: Option<ModCompPlan>,
}

impl PlanConfig {
    pub fn preset(name: &str) -> Result<Self> {
        let src = preset_source(name).ok_or_else(|| {
            Error::Config(format!("unknown preset `{name}` (available: {})", PRESETS.join(", ")))
        })?;
        Self::from_toml(src)
    }

    /// Parses a plan file. Numbers may be written as TOML numbers or as
    /// strings holding a decimal or a fraction (`"1/3"`); they are kept exact.
    pub fn from_toml(src: &str) -> Result<Self> {
        let table: Table = src.parse().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        let mut dl = SplitParams::empty(Direction::Downlink);
        let mut ul = SplitParams::empty(Direction::Uplink);
        let mut options = SplitOption::ALL.to_vec();
        let mut modcomp = None;
        // [common] first so [dl]/[ul] override it regardless of file order
        if let Some(common) = table.get("common") {
            let common = as_table(common, "common")?;
            fill_params(&mut dl, common, "common")?;
            fill_params(&mut ul, common, "common")?;
        }
        for (key, value) in &table {
            match key.as_str() {
                "common" => {}
                "dl" => fill_params(&mut dl, as_table(value, "dl")?, "dl")?,
                "ul" => fill_params(&mut ul, as_table(value, "ul")?, "ul")?,
                "options" => {
                    let list = value.as_array().ok_or_else(|| Error::Config("`options` must be an array".into()))?;
                    options = list
                        .iter()
                        .map(|v| {
                            v.as_str()
                                .ok_or_else(|| Error::Config("`options` entries must be strings".into()))?
                                .parse::<SplitOption>()
                                .map_err(|e| Error::Config(e.to_string()))
                        })
                        .collect::<Result<_>>()?;
                    options.sort();
                    options.dedup();
                }
                "modcomp" => modcomp = Some(parse_modcomp(as_table(value, "modcomp")?)?),
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        Ok(PlanConfig { options, dl, ul, modcomp })
    }

    pub fn params(&self, direction: Direction) -> &SplitParams<Exact> {
        match direction {
            Direction::Downlink => &self.dl,
            Direction::Uplink => &self.ul,
        }
    }

    /// Effective configuration as TOML, defaults resolved.
    pub fn to_toml(&self) -> String {
        let mut out = String::new();
        let names: Vec<String> = self.options.iter().map(|o| format!("\"{}\"", o.name())).collect();
        out.push_str(&format!("options = [{}]\n", names.join(", ")));
        for (section, p) in [("dl", &self.dl), ("ul", &self.ul)] {
            out.push_str(&format!("\n[{section}]\n"));
            for (name, v) in p.fields() {
                if let Some(v) = v {
                    out.push_str(&format!("{name} = {}\n", exact_literal(v)));
                }
            }
        }
        if let Some(m) = &self.modcomp {
            out.push_str("\n[modcomp]\n");
            out.push_str(&format!("bandwidth = {:?}\n", m.bandwidth_hz));
            out.push_str(&format!("numerology = {}\n", m.numerology.mu()));
            out.push_str(&format!("overhead = {:?}\n", m.overhead));
            out.push_str(&format!("layers = {}\n", m.layers));
            out.push_str(&format!("widths = {:?}\n", m.widths));
            if let Some(n) = m.n_ru {
                out.push_str(&format!("n_ru = {n}\n"));
            }
        }
        out
    }
}

fn exact_literal(v: &Exact) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("\"{}/{}\"", v.numer(), v.denom())
    }
}

fn as_table<'a>(value: &'a Value, name: &str) -> Result<&'a Table> {
    value.as_table().ok_or_else(|| Error::Config(format!("`{name}` must be a table")))
}

fn exact_value(value: &Value, key: &str) -> Result<Exact> {
    let parsed = match value {
        Value::Integer(i) => Some(Ratio::from_integer(i128::from(*i))),
        // Display gives the shortest decimal that round-trips
        Value::Float(f) if f.is_finite() => parse_exact(&f.to_string()),
        Value::String(s) => parse_exact(s),
        _ => None,
    };
    parsed.ok_or_else(|| Error::Config(format!("`{key}` must be a number or a \"a/b\" fraction, got {value}")))
}

fn fill_params(p: &mut SplitParams<Exact>, table: &Table, section: &str) -> Result<()> {
    for (key, value) in table {
        let slot = p
            .field_mut(key)
            .ok_or_else(|| Error::Config(format!("unknown key `{key}` in [{section}]")))?;
        *slot = Some(exact_value(value, key)?);
    }
    Ok(())
}

fn parse_modcomp(table: &Table) -> Result<ModCompPlan> {
    let num = |key: &str| -> Result<Option<f64>> {
        table.get(key).map(|v| exact_value(v, key).map(|e| e.as_f64())).transpose()
    };
    let int = |key: &str| -> Result<Option<u32>> {
        table
            .get(key)
            .map(|v| {
                v.as_integer()
                    .and_then(|i| u32::try_from(i).ok())
                    .ok_or_else(|| Error::Config(format!("`{key}` must be a non-negative integer")))
            })
            .transpose()
    };
    let known: BTreeSet<&str> = ["bandwidth", "numerology", "overhead", "layers", "widths", "n_ru"].into();
    if let Some(k) = table.keys().find(|k| !known.contains(k.as_str())) {
        return Err(Error::Config(format!("unknown key `{k}` in [modcomp]")));
    }
    let mu = int("numerology")?.ok_or_else(|| Error::Config("[modcomp] needs `numerology`".into()))?;
    let widths = match table.get("widths") {
        None => vec![UNCOMPRESSED_BITWIDTH, 8, 6, 4, 2],
        Some(v) => v
            .as_array()
            .ok_or_else(|| Error::Config("`widths` must be an array".into()))?
            .iter()
            .map(|w| {
                w.as_integer()
                    .and_then(|i| u32::try_from(i).ok())
                    .ok_or_else(|| Error::Config("`widths` entries must be integers".into()))
            })
            .collect::<Result<_>>()?,
    };
    let plan = ModCompPlan {
        bandwidth_hz: num("bandwidth")?.ok_or_else(|| Error::Config("[modcomp] needs `bandwidth`".into()))?,
        numerology: Numerology::new(u8::try_from(mu).unwrap_or(u8::MAX)).map_err(|e| Error::Config(e.to_string()))?,
        overhead: num("overhead")?.unwrap_or(0.0),
        layers: int("layers")?.unwrap_or(1),
        widths,
        n_ru: int("n_ru")?,
    };
    // surface bad widths and bandwidths at load time
    for &w in &plan.widths {
        modcomp_capacity(plan.bandwidth_hz, plan.numerology, plan.overhead, plan.layers, w)
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    if plan.n_ru == Some(0) {
        return Err(Error::Config("`n_ru` must be at least 1".into()));
    }
    Ok(plan)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitRow {
    pub option: SplitOption,
    pub dl: CapacityValue<Exact>,
    pub ul: CapacityValue<Exact>,
    pub latency: LatencyBound,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModCompRow {
    pub bitwidth: u32,
    pub per_ru_bps: u64,
    pub total_bps: Option<u64>,
    /// `W / 32`.
    pub ratio: f64,
    pub reduction_percent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanReport {
    pub splits: Vec<SplitRow>,
    pub modcomp: Vec<ModCompRow>,
}

/// Evaluates every requested option in both directions. A parameter missing
/// for a requested option is an error.
pub fn plan_report(cfg: &PlanConfig) -> Result<PlanReport> {
    let splits = cfg
        .options
        .iter()
        .map(|&option| {
            Ok(SplitRow {
                option,
                dl: required_capacity(option, &cfg.dl)?,
                ul: required_capacity(option, &cfg.ul)?,
                latency: latency_requirement(option),
            })
        })
        .collect::<Result<_>>()?;
    let modcomp = match &cfg.modcomp {
        None => Vec::new(),
        Some(m) => m
            .widths
            .iter()
            .map(|&w| {
                let per_ru = modcomp_capacity(m.bandwidth_hz, m.numerology, m.overhead, m.layers, w)?;
                Ok(ModCompRow {
                    bitwidth: w,
                    per_ru_bps: per_ru,
                    total_bps: m.n_ru.map(|n| scenario_fronthaul_capacity(n, per_ru)).transpose()?,
                    ratio: f64::from(w) / f64::from(UNCOMPRESSED_BITWIDTH),
                    reduction_percent: reduction_percent(w, UNCOMPRESSED_BITWIDTH)?,
                })
            })
            .collect::<Result<_>>()?,
    };
    Ok(PlanReport { splits, modcomp })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        for name in PRESETS {
            let cfg = PlanConfig::preset(name).unwrap();
            plan_report(&cfg).unwrap();
            // the effective config re-parses to the same plan
            assert_eq!(PlanConfig::from_toml(&cfg.to_toml()).unwrap(), cfg, "{name}");
        }
        assert!(PlanConfig::preset("nope").is_err());
    }

    #[test]
    fn code_rate_kept_exact() {
        let cfg = PlanConfig::preset("table1-example").unwrap();
        assert_eq!(cfg.dl.code_rate, Some(Ratio::new(1, 3)));
        assert_eq!(cfg.dl.sample_rate, Some(Ratio::from_integer(30_720_000)));
    }

    #[test]
    fn section_overrides_common() {
        let cfg = PlanConfig::from_toml("[dl]\nlayers = 4\n[common]\nlayers = 2\n").unwrap();
        assert_eq!(cfg.dl.layers, Some(Ratio::from_integer(4)));
        assert_eq!(cfg.ul.layers, Some(Ratio::from_integer(2)));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(PlanConfig::from_toml("[dl]\npeak_rat = 1\n").is_err());
        assert!(PlanConfig::from_toml("extra = 1\n").is_err());
        assert!(PlanConfig::from_toml("[modcomp]\nbandwidth = 1e6\nnumerology = 1\nlayer = 1\n").is_err());
        assert!(PlanConfig::from_toml("[dl]\npeak_rate = \"fast\"\n").is_err());
    }

    #[test]
    fn missing_parameter_names_field_and_option() {
        let cfg = PlanConfig::from_toml("options = [\"8\"]\n[common]\nsample_rate = 1\nbitwidth = 32\n").unwrap();
        let err = plan_report(&cfg).unwrap_err();
        assert_eq!(
            err,
            Error::MissingParameter {
                param: "antenna_ports",
                option: "Option 8".into()
            }
        );
    }

    #[test]
    fn modcomp_section() {
        let cfg = PlanConfig::preset("nr-20mhz-mu1").unwrap();
        let report = plan_report(&cfg).unwrap();
        let rows: Vec<(u32, u64)> = report.modcomp.iter().map(|r| (r.bitwidth, r.per_ru_bps)).collect();
        assert!(rows.contains(&(32, 569_856_000)));
        assert!(rows.contains(&(6, 106_848_000)));
        let w2 = report.modcomp.iter().find(|r| r.bitwidth == 2).unwrap();
        assert_eq!(w2.reduction_percent, 93.75);
        // the 7-2x row with N_SC = 12 × 53 agrees with the modcomp line
        assert_eq!(report.splits[0].dl.bps(), Some(Ratio::from_integer(569_856_000)));
    }

    #[test]
    fn bad_modcomp_width_rejected_at_load() {
        assert!(PlanConfig::from_toml("[modcomp]\nbandwidth = 20e6\nnumerology = 1\nwidths = [5]\n").is_err());
        assert!(PlanConfig::from_toml("[modcomp]\nbandwidth = 20e6\nnumerology = 3\n").is_err());
    }
}
