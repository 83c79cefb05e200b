// SPDX-License-Identifier: Apache-2.0

//! `srlnc`: plan dual-channel sRLNC links, sweep them over distance, and
//! simulate them.

mod config;
mod error;
mod plan;
mod simulate;
mod sweep;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use srlnc_core::planner::{Channel, RedundancyMode};
use srlnc_core::simulator::ErrorMode;

use crate::config::{find_profile, load_profile, LoadedRun, PROFILE_DIR_ENV};
use crate::error::{CliError, Result};
use crate::plan::PlanFormat;
use crate::simulate::SimOverrides;
use crate::sweep::{parse_modulations, AuxDistance, DistanceRange, OnError, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "srlnc", version, about = "Dual-channel sRLNC link planner and simulator")]
#[command(after_help = format!(
    "Channel profiles are looked up in the directories listed in {PROFILE_DIR_ENV} \
     (as channel_b.toml / channel_c.toml) before falling back to the built-in ones.\n\n\
     Exit codes: 0 ok, 1 I/O, 2 usage, 3 config, 4 profile or out-of-range, 5 infeasible distance."
))]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RMode {
    Int,
    Frac,
}

impl From<RMode> for RedundancyMode {
    fn from(m: RMode) -> Self {
        match m {
            RMode::Int => Self::Integer,
            RMode::Frac => Self::Fractional,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimMode {
    Symbol,
    Bit,
}

impl From<SimMode> for ErrorMode {
    fn from(m: SimMode) -> Self {
        match m {
            SimMode::Symbol => Self::Symbol,
            SimMode::Bit => Self::Bit,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Size one link: redundancy, code rate, auxiliary rate and delays.
    Plan {
        #[arg(long)]
        config: PathBuf,
        /// Channel profile; overrides the config's `profile` and `channel`.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = PlanFormat::Text)]
        format: PlanFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plan every (modulation, main distance) grid point and write CSV.
    Sweep {
        #[arg(long)]
        channel: Channel,
        /// Comma-separated, e.g. `16PSK,8PSK,QPSK,BPSK`; may be empty.
        #[arg(long, default_value = "16PSK,8PSK,QPSK,BPSK")]
        modulations: String,
        /// Main distance grid `lo:hi:step` in cm.
        #[arg(long, default_value = "200:2000:50")]
        dmain: DistanceRange,
        /// Auxiliary distance in cm, or `equal` to track the main distance.
        #[arg(long)]
        daux: AuxDistance,
        #[arg(long, value_enum, default_value_t = RMode::Int)]
        r_mode: RMode,
        /// Output CSV; `-` for stdout.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        symbol_bits: usize,
        #[arg(long, default_value_t = 0.73)]
        fec_rate: f64,
        #[arg(long, value_enum, default_value_t = OnError::Abort)]
        on_error: OnError,
    },
    /// Run the discrete-event simulation and write a TOML report.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        generations: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<SimMode>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Include one `[[generation]]` record per generation.
        #[arg(long)]
        records: bool,
    },
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Plan {
            config,
            profile,
            format,
            out,
        } => {
            let run = LoadedRun::read(&config)?;
            let result = plan::plan(&run, profile.as_deref())?;
            if let Some(w) = &result.aux_warning {
                eprintln!("warning: {w}");
            }
            write_output(out.as_deref(), &plan::render(&result, format))
        }
        Command::Sweep {
            channel,
            modulations,
            dmain,
            daux,
            r_mode,
            out,
            profile,
            k,
            symbol_bits,
            fec_rate,
            on_error,
        } => {
            let spec = SweepSpec {
                channel,
                modulations: parse_modulations(&modulations)?,
                d_main: dmain,
                d_aux: daux,
                r_mode: r_mode.into(),
                k,
                symbol_bits,
                fec_rate,
                on_error,
            };
            let profile = match profile {
                Some(p) => load_profile(&p, Some(channel))?,
                None => find_profile(channel)?,
            };
            if out.as_os_str() == "-" {
                sweep::run_sweep(&spec, &profile, io::stdout().lock())?;
            } else {
                // render fully first so an aborted sweep leaves no partial file
                let mut buf = Vec::new();
                sweep::run_sweep(&spec, &profile, &mut buf)?;
                let mut file = BufWriter::new(File::create(&out).map_err(|e| CliError::io(&out, e))?);
                file.write_all(&buf)
                    .and_then(|_| file.flush())
                    .map_err(|e| CliError::io(&out, e))?;
            }
            Ok(())
        }
        Command::Simulate {
            config,
            generations,
            seed,
            mode,
            out,
            profile,
            records,
        } => {
            let run = LoadedRun::read(&config)?;
            let overrides = SimOverrides {
                generations,
                seed,
                mode: mode.map(Into::into),
            };
            let report = simulate::simulate(&run, profile.as_deref(), overrides)?;
            let s = &report.summary;
            eprintln!(
                "seed {}: {} generations, {} decoded, {} insufficient, {} rank-deficient",
                s.seed, s.generations, s.decoded, s.insufficient, s.rank_deficient
            );
            write_output(Some(&out), &report.to_toml(records))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
