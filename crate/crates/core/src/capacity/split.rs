use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::RateScalar;

/// Functional split option.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SplitOption {
    Opt1,
    Opt2,
    Opt4,
    Opt6,
    Opt7_3,
    Opt7_2x,
    Opt7_1,
    Opt8,
}

impl SplitOption {
    /// Ordered from the highest split (closest to the core) to the lowest.
    pub const ALL: [SplitOption; 8] = [
        SplitOption::Opt1,
        SplitOption::Opt2,
        SplitOption::Opt4,
        SplitOption::Opt6,
        SplitOption::Opt7_3,
        SplitOption::Opt7_2x,
        SplitOption::Opt7_1,
        SplitOption::Opt8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SplitOption::Opt1 => "1",
            SplitOption::Opt2 => "2",
            SplitOption::Opt4 => "4",
            SplitOption::Opt6 => "6",
            SplitOption::Opt7_3 => "7-3",
            SplitOption::Opt7_2x => "7-2x",
            SplitOption::Opt7_1 => "7-1",
            SplitOption::Opt8 => "8",
        }
    }
}

impl fmt::Display for SplitOption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Option {}", self.name())
    }
}

impl FromStr for SplitOption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().trim_start_matches("Option").trim_start_matches("opt").trim_start_matches("Opt");
        let key = key.trim().replace('_', "-");
        SplitOption::ALL
            .into_iter()
            .find(|o| o.name() == key || (key == "7-2" && *o == SplitOption::Opt7_2x))
            .ok_or_else(|| Error::invalid(format!("unknown split option `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "dl")]
    Downlink,
    #[serde(rename = "ul")]
    Uplink,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Downlink, Direction::Uplink];

    pub fn name(self) -> &'static str {
        match self {
            Direction::Downlink => "DL",
            Direction::Uplink => "UL",
        }
    }
}

/// Parameters of one direction of a split dimensioning problem.
///
/// Every rate is in bit/s, bandwidths in Hz, the modulation orders in bits
/// per symbol. Unset fields are only an error for options that need them.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitParams<T> {
    pub direction: Direction,
    pub peak_rate: Option<T>,
    pub bandwidth: Option<T>,
    pub reference_bandwidth: Option<T>,
    pub layers: Option<T>,
    pub reference_layers: Option<T>,
    pub mod_order: Option<T>,
    pub reference_mod_order: Option<T>,
    pub control_rate: Option<T>,
    pub code_rate: Option<T>,
    pub subcarriers: Option<T>,
    pub symbols_per_ms: Option<T>,
    pub bitwidth: Option<T>,
    pub antenna_ports: Option<T>,
    pub sample_rate: Option<T>,
    /// Fallback MAC information rate for options 7-x.
    pub mac_info: Option<T>,
    pub mac_info_7_1: Option<T>,
    pub mac_info_7_2: Option<T>,
    pub mac_info_7_3: Option<T>,
    pub signaling: Option<T>,
}

/// Names accepted in configuration files, in declaration order.
pub const SPLIT_PARAM_FIELDS: [&str; 19] = [
    "peak_rate",
    "bandwidth",
    "reference_bandwidth",
    "layers",
    "reference_layers",
    "mod_order",
    "reference_mod_order",
    "control_rate",
    "code_rate",
    "subcarriers",
    "symbols_per_ms",
    "bitwidth",
    "antenna_ports",
    "sample_rate",
    "mac_info",
    "mac_info_7_1",
    "mac_info_7_2",
    "mac_info_7_3",
    "signaling",
];

impl<T> SplitParams<T> {
    pub fn empty(direction: Direction) -> Self {
        SplitParams {
            direction,
            peak_rate: None,
            bandwidth: None,
            reference_bandwidth: None,
            layers: None,
            reference_layers: None,
            mod_order: None,
            reference_mod_order: None,
            control_rate: None,
            code_rate: None,
            subcarriers: None,
            symbols_per_ms: None,
            bitwidth: None,
            antenna_ports: None,
            sample_rate: None,
            mac_info: None,
            mac_info_7_1: None,
            mac_info_7_2: None,
            mac_info_7_3: None,
            signaling: None,
        }
    }

    /// Field by configuration name.
    pub fn field_mut(&mut self, name: &str) -> Option<&mut Option<T>> {
        Some(match name {
            "peak_rate" => &mut self.peak_rate,
            "bandwidth" => &mut self.bandwidth,
            "reference_bandwidth" => &mut self.reference_bandwidth,
            "layers" => &mut self.layers,
            "reference_layers" => &mut self.reference_layers,
            "mod_order" => &mut self.mod_order,
            "reference_mod_order" => &mut self.reference_mod_order,
            "control_rate" => &mut self.control_rate,
            "code_rate" => &mut self.code_rate,
            "subcarriers" => &mut self.subcarriers,
            "symbols_per_ms" => &mut self.symbols_per_ms,
            "bitwidth" => &mut self.bitwidth,
            "antenna_ports" => &mut self.antenna_ports,
            "sample_rate" => &mut self.sample_rate,
            "mac_info" => &mut self.mac_info,
            "mac_info_7_1" => &mut self.mac_info_7_1,
            "mac_info_7_2" => &mut self.mac_info_7_2,
            "mac_info_7_3" => &mut self.mac_info_7_3,
            "signaling" => &mut self.signaling,
            _ => return None,
        })
    }

    pub fn fields(&self) -> [(&'static str, Option<&T>); 19] {
        [
            ("peak_rate", self.peak_rate.as_ref()),
            ("bandwidth", self.bandwidth.as_ref()),
            ("reference_bandwidth", self.reference_bandwidth.as_ref()),
            ("layers", self.layers.as_ref()),
            ("reference_layers", self.reference_layers.as_ref()),
            ("mod_order", self.mod_order.as_ref()),
            ("reference_mod_order", self.reference_mod_order.as_ref()),
            ("control_rate", self.control_rate.as_ref()),
            ("code_rate", self.code_rate.as_ref()),
            ("subcarriers", self.subcarriers.as_ref()),
            ("symbols_per_ms", self.symbols_per_ms.as_ref()),
            ("bitwidth", self.bitwidth.as_ref()),
            ("antenna_ports", self.antenna_ports.as_ref()),
            ("sample_rate", self.sample_rate.as_ref()),
            ("mac_info", self.mac_info.as_ref()),
            ("mac_info_7_1", self.mac_info_7_1.as_ref()),
            ("mac_info_7_2", self.mac_info_7_2.as_ref()),
            ("mac_info_7_3", self.mac_info_7_3.as_ref()),
            ("signaling", self.signaling.as_ref()),
        ]
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> SplitParams<U> {
        let mut out = SplitParams::empty(self.direction);
        for (name, v) in self.fields() {
            *out.field_mut(name).expect("same field set") = v.map(&mut f);
        }
        out
    }
}

impl<T: RateScalar> SplitParams<T> {
    pub fn to_f64(&self) -> SplitParams<f64> {
        self.map(|v| v.as_f64())
    }

    fn get(&self, value: &Option<T>, param: &'static str, option: SplitOption) -> Result<T> {
        let v = value.clone().ok_or_else(|| Error::MissingParameter {
            param,
            option: option.to_string(),
        })?;
        if v < T::zero() {
            return Err(Error::invalid(format!("`{param}` must be non-negative, got {v:?}")));
        }
        Ok(v)
    }

    fn positive(&self, value: &Option<T>, param: &'static str, option: SplitOption) -> Result<T> {
        let v = self.get(value, param, option)?;
        if v == T::zero() {
            return Err(Error::invalid(format!("`{param}` must be positive")));
        }
        Ok(v)
    }

    /// `BW/BW_ref × N_L/N_Lref × M/M_ref`.
    fn scaling(&self, option: SplitOption) -> Result<T> {
        let bw = self.get(&self.bandwidth, "bandwidth", option)?;
        let bw_ref = self.positive(&self.reference_bandwidth, "reference_bandwidth", option)?;
        let nl = self.get(&self.layers, "layers", option)?;
        let nl_ref = self.positive(&self.reference_layers, "reference_layers", option)?;
        let m = self.get(&self.mod_order, "mod_order", option)?;
        let m_ref = self.positive(&self.reference_mod_order, "reference_mod_order", option)?;
        Ok(bw / bw_ref * (nl / nl_ref) * (m / m_ref))
    }

    fn mac_info_for(&self, option: SplitOption) -> Result<T> {
        let specific = match option {
            SplitOption::Opt7_1 => &self.mac_info_7_1,
            SplitOption::Opt7_2x => &self.mac_info_7_2,
            SplitOption::Opt7_3 => &self.mac_info_7_3,
            _ => &None,
        };
        match specific {
            Some(_) => self.get(specific, "mac_info", option),
            None => self.get(&self.mac_info, "mac_info", option),
        }
    }

    /// `N_SC × N_symb × W × 1000`, the IQ rate of one stream.
    fn iq_stream_rate(&self, option: SplitOption) -> Result<T> {
        let nsc = self.get(&self.subcarriers, "subcarriers", option)?;
        let nsymb = self.get(&self.symbols_per_ms, "symbols_per_ms", option)?;
        let w = self.get(&self.bitwidth, "bitwidth", option)?;
        Ok(nsc * nsymb * w * T::from_int(1000))
    }
}

/// A capacity requirement, or a marker for combinations the split does not
/// define (the uplink of Option 7-3).
#[derive(Debug, Clone, PartialEq)]
pub enum CapacityValue<T> {
    Bps(T),
    NotApplicable,
}

impl<T: Clone> CapacityValue<T> {
    pub fn bps(&self) -> Option<T> {
        match self {
            CapacityValue::Bps(v) => Some(v.clone()),
            CapacityValue::NotApplicable => None,
        }
    }
}

/// Transport capacity required by `option` for the direction in `p`.
pub fn required_capacity<T: RateScalar>(option: SplitOption, p: &SplitParams<T>) -> Result<CapacityValue<T>> {
    use SplitOption::*;
    let value = match option {
        Opt1 | Opt4 => p.get(&p.peak_rate, "peak_rate", option)? * p.scaling(option)?,
        Opt2 => {
            p.get(&p.peak_rate, "peak_rate", option)? * p.scaling(option)? + p.get(&p.signaling, "signaling", option)?
        }
        Opt6 => {
            (p.get(&p.peak_rate, "peak_rate", option)? + p.get(&p.control_rate, "control_rate", option)?)
                * p.scaling(option)?
        }
        Opt7_3 => {
            if p.direction == Direction::Uplink {
                return Ok(CapacityValue::NotApplicable);
            }
            let r = p.positive(&p.code_rate, "code_rate", option)?;
            if r > T::one() {
                return Err(Error::invalid(format!("`code_rate` must be in (0, 1], got {r:?}")));
            }
            (p.get(&p.peak_rate, "peak_rate", option)? + p.get(&p.control_rate, "control_rate", option)?)
                * p.scaling(option)?
                / r
                + p.mac_info_for(option)?
        }
        Opt7_2x => p.iq_stream_rate(option)? * p.get(&p.layers, "layers", option)? + p.mac_info_for(option)?,
        Opt7_1 => p.iq_stream_rate(option)? * p.get(&p.antenna_ports, "antenna_ports", option)? + p.mac_info_for(option)?,
        Opt8 => {
            p.get(&p.sample_rate, "sample_rate", option)?
                * p.get(&p.bitwidth, "bitwidth", option)?
                * p.get(&p.antenna_ports, "antenna_ports", option)?
                * T::from_int(5)
        }
    };
    Ok(CapacityValue::Bps(value))
}

/// One-way latency bound of a split option.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatencyBound {
    Fixed(Duration),
    Range { min: Duration, max: Duration },
}

impl LatencyBound {
    /// Most stringent end of the bound.
    pub fn lower(self) -> Duration {
        match self {
            LatencyBound::Fixed(d) => d,
            LatencyBound::Range { min, .. } => min,
        }
    }

    pub fn upper(self) -> Duration {
        match self {
            LatencyBound::Fixed(d) => d,
            LatencyBound::Range { max, .. } => max,
        }
    }
}

impl fmt::Display for LatencyBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn show(d: Duration) -> String {
            let us = d.as_micros();
            if us >= 1000 {
                format!("{} ms", us as f64 / 1000.0)
            } else {
                format!("{us} us")
            }
        }
        match self {
            LatencyBound::Fixed(d) => f.write_str(&show(*d)),
            LatencyBound::Range { min, max } => {
                write!(f, "{}-{}", show(*min).trim_end_matches(" ms"), show(*max))
            }
        }
    }
}

pub fn latency_requirement(option: SplitOption) -> LatencyBound {
    match option {
        SplitOption::Opt1 => LatencyBound::Fixed(Duration::from_millis(10)),
        SplitOption::Opt2 => LatencyBound::Range {
            min: Duration::from_micros(1500),
            max: Duration::from_millis(10),
        },
        SplitOption::Opt4 => LatencyBound::Fixed(Duration::from_micros(100)),
        _ => LatencyBound::Fixed(Duration::from_micros(250)),
    }
}
