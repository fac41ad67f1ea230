use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use fhkit::codecs::container::{self, CodecSpec, CodecStats};
use fhkit::codecs::{BeamspaceConfig, BfpConfig, BlockScalingConfig, InnerStage, MuLawConfig};
use fhkit::iq_core::{read_iq_samples, write_iq_samples};
use serde::{Deserialize, Serialize};

use crate::error::{read_config, read_input, CliError, CliResult};
use crate::output::{resolve, write_atomic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Bfp,
    BlockScaling,
    Mulaw,
    Modcomp,
    Beamspace,
}

impl Method {
    fn tag(self) -> u8 {
        match self {
            Method::Bfp => container::TAG_BFP,
            Method::BlockScaling => container::TAG_BLOCK_SCALING,
            Method::Mulaw => container::TAG_MULAW,
            Method::Modcomp => container::TAG_MODCOMP,
            Method::Beamspace => container::TAG_BEAMSPACE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CodecDirection {
    Compress,
    Decompress,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct BeamspaceFile {
    /// Antenna weights per transformed vector (a power of two).
    vector_len: usize,
    threshold: f64,
    inner: InnerStage,
}

impl Default for BeamspaceFile {
    fn default() -> Self {
        let base = BeamspaceConfig::default();
        Self {
            vector_len: 64,
            threshold: base.threshold,
            inner: base.inner,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Empty {}

fn parse<T: serde::de::DeserializeOwned>(src: &str) -> CliResult<T> {
    toml::from_str(src).map_err(|e| CliError::Usage(format!("invalid codec config: {e}")))
}

/// Builds the codec from an optional TOML file whose keys are the fields of
/// the method's configuration.
pub fn codec_spec(method: Method, src: Option<&str>) -> CliResult<CodecSpec> {
    let src = src.unwrap_or("");
    let spec = match method {
        Method::Bfp => CodecSpec::Bfp(parse::<BfpConfig>(src)?),
        Method::BlockScaling => CodecSpec::BlockScaling(parse::<BlockScalingConfig>(src)?),
        Method::Mulaw => CodecSpec::MuLaw(parse::<MuLawConfig>(src)?),
        Method::Modcomp => {
            parse::<Empty>(src)?;
            CodecSpec::ModComp
        }
        Method::Beamspace => {
            let f: BeamspaceFile = parse(src)?;
            CodecSpec::Beamspace {
                config: BeamspaceConfig {
                    threshold: f.threshold,
                    inner: f.inner,
                },
                vector_len: f.vector_len,
            }
        }
    };
    Ok(spec)
}

fn spec_toml(spec: &CodecSpec) -> String {
    let text = match spec {
        CodecSpec::Bfp(c) => toml::to_string(c),
        CodecSpec::BlockScaling(c) => toml::to_string(c),
        CodecSpec::MuLaw(c) => toml::to_string(c),
        CodecSpec::ModComp => Ok(String::new()),
        CodecSpec::Beamspace { config, vector_len } => toml::to_string(&BeamspaceFile {
            vector_len: *vector_len,
            threshold: config.threshold,
            inner: config.inner,
        }),
    };
    text.expect("codec configs serialize")
}

pub struct CodecArgs<'a> {
    pub method: Method,
    pub direction: CodecDirection,
    pub config: Option<&'a Path>,
    pub input: &'a Path,
    pub out: Option<&'a Path>,
}

pub fn run(args: &CodecArgs) -> CliResult<String> {
    let src = args.config.map(read_config).transpose()?;
    let spec = codec_spec(args.method, src.as_deref())?;
    let input = read_input(args.input)?;

    let (bytes, stats, in_bits, out_bits) = match args.direction {
        CodecDirection::Compress => {
            let samples = read_iq_samples(&input).map_err(CliError::data)?;
            let (bytes, stats) = container::encode(&spec, &samples).map_err(CliError::data)?;
            (bytes, stats, stats.uncompressed_bits, stats.compressed_bits)
        }
        CodecDirection::Decompress => {
            if let Some(&tag) = input.first() {
                if tag != args.method.tag() {
                    return Err(CliError::Data(format!(
                        "parse error at byte offset 0: file holds method tag {tag}, not {}",
                        spec.name()
                    )));
                }
            }
            let (samples, stats) = container::decode(&input).map_err(CliError::data)?;
            (write_iq_samples(&samples), stats, stats.compressed_bits, stats.uncompressed_bits)
        }
    };

    let out = resolve(args.out, &default_name(args.input, args.direction));
    write_atomic(&out, &bytes)?;
    Ok(report(&spec, args, &out, &stats, in_bits, out_bits))
}

fn default_name(input: &Path, direction: CodecDirection) -> String {
    let stem = input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    match direction {
        CodecDirection::Compress => format!("{stem}.fhc"),
        CodecDirection::Decompress => format!("{stem}.iq"),
    }
}

fn report(spec: &CodecSpec, args: &CodecArgs, out: &PathBuf, stats: &CodecStats, in_bits: u64, out_bits: u64) -> String {
    let mut s = String::new();
    let direction = match args.direction {
        CodecDirection::Compress => "compress",
        CodecDirection::Decompress => "decompress",
    };
    let ratio = stats.ratio().map_or_else(|| "n/a".to_string(), |r| format!("{r:.4}"));
    let _ = writeln!(s, "method       {}", spec.name());
    let _ = writeln!(s, "direction    {direction}");
    let _ = writeln!(s, "input        {}", args.input.display());
    let _ = writeln!(s, "output       {}", out.display());
    let _ = writeln!(s, "samples      {}", stats.samples);
    let _ = writeln!(s, "input bits   {in_bits}");
    let _ = writeln!(s, "output bits  {out_bits}");
    let _ = writeln!(s, "ratio        {ratio}");
    let _ = writeln!(s, "file bytes   {}", stats.file_bytes);
    let cfg = spec_toml(spec);
    if args.direction == CodecDirection::Compress && !cfg.is_empty() {
        let _ = writeln!(s, "\n[config]\n{}", cfg.trim_end());
    }
    s
}
