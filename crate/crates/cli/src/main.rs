//! `fhkit` command-line front end.

mod codec;
mod error;
mod gen;
mod output;
mod plan;
mod sim;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fhkit::iq_core::ModOrder;

use error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "fhkit", version, about = "Fronthaul compression, split dimensioning and simulation tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compress an IQ file or decompress a compressed-block file.
    Codec {
        #[arg(long, value_enum)]
        method: codec::Method,
        #[arg(long, value_enum, default_value = "compress")]
        direction: codec::CodecDirection,
        /// TOML file with the codec configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Transport capacity and latency requirements of the split options.
    Plan {
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Built-in plan: table1-example or nr-20mhz-mu1.
        #[arg(long)]
        preset: Option<String>,
        /// Also write the report as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the downlink simulator over a sweep of operating points.
    Sim {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        sweep: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Sweep CSV (default sweep.csv).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-packet delay trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Generate a test IQ file.
    Gen {
        #[arg(long, value_enum, default_value = "symbols")]
        kind: gen::Kind,
        #[arg(long, default_value = "64qam")]
        order: ModOrder,
        #[arg(long, default_value_t = 1200)]
        count: usize,
        #[arg(long, default_value_t = 32767, allow_hyphen_values = true)]
        amplitude: i16,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Codec {
            method,
            direction,
            config,
            input,
            out,
        } => codec::run(&codec::CodecArgs {
            method: *method,
            direction: *direction,
            config: config.as_deref(),
            input,
            out: out.as_deref(),
        }),
        Command::Plan { config, preset, out } => plan::run(&plan::PlanArgs {
            config: config.as_deref(),
            preset: preset.as_deref(),
            out: out.as_deref(),
        }),
        Command::Sim {
            config,
            sweep,
            seed,
            out,
            trace,
        } => sim::run(&sim::SimArgs {
            config: config.as_deref(),
            sweep: sweep.as_deref(),
            seed: *seed,
            out: out.as_deref(),
            trace: trace.as_deref(),
        }),
        Command::Gen {
            kind,
            order,
            count,
            amplitude,
            seed,
            out,
        } => gen::run(&gen::GenArgs {
            kind: *kind,
            order: *order,
            count: *count,
            amplitude: *amplitude,
            seed: *seed,
            out: out.as_deref(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
