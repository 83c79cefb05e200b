// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::str::FromStr;

use srlnc_core::planner::{plan_link, Channel, ChannelProfile, LinkConfig, Modulation, RedundancyMode};

use crate::error::{CliError, Result};

pub const CSV_HEADER: [&str; 8] = ["modulation", "d_main_cm", "d_aux_cm", "p_e", "P_s", "R", "R_L", "C_aux_bps"];

/// Written into every numeric column of a row that could not be planned.
pub const ERROR_MARKER: &str = "ERR";

/// Inclusive distance grid `lo:hi:step` in cm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceRange {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl DistanceRange {
    /// Grid points `lo + i·step ≤ hi`, computed by multiplication so that
    /// long grids do not drift.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.lo + i as f64 * self.step).collect()
    }
}

impl FromStr for DistanceRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts.as_slice() else {
            return Err(format!("expected lo:hi:step, got `{s}`"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        let range = Self {
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        };
        if !(range.step > 0.0 && range.step.is_finite()) {
            return Err(format!("step must be positive, got {}", range.step));
        }
        if !(range.lo.is_finite() && range.hi.is_finite() && range.lo <= range.hi) {
            return Err(format!("need lo ≤ hi, got {}:{}", range.lo, range.hi));
        }
        Ok(range)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuxDistance {
    Fixed(f64),
    /// Same as the main distance at every grid point.
    Equal,
}

impl FromStr for AuxDistance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim().eq_ignore_ascii_case("equal") {
            return Ok(Self::Equal);
        }
        s.trim()
            .parse::<f64>()
            .map(Self::Fixed)
            .map_err(|_| format!("expected a distance in cm or `equal`, got `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OnError {
    /// Stop at the first grid point that cannot be planned.
    Abort,
    /// Emit the row with every numeric column set to `ERR`.
    Mark,
}

/// Parses a comma-separated modulation list; empty input gives no entries.
pub fn parse_modulations(s: &str) -> Result<Vec<Modulation>> {
    s.split(',')
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .map(|m| Modulation::from_str(m).map_err(CliError::from))
        .collect()
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub channel: Channel,
    pub modulations: Vec<Modulation>,
    pub d_main: DistanceRange,
    pub d_aux: AuxDistance,
    pub r_mode: RedundancyMode,
    pub k: usize,
    pub symbol_bits: usize,
    pub fec_rate: f64,
    pub on_error: OnError,
}

/// Writes the sweep CSV, one row per modulation and grid distance in that
/// order. Rows with `R = 0` are kept.
pub fn run_sweep<W: Write>(spec: &SweepSpec, profile: &ChannelProfile, out: W) -> Result<usize> {
    if profile.channel_id != spec.channel {
        return Err(CliError::config(format!(
            "profile is for channel {}, sweep asks for {}",
            profile.channel_id, spec.channel
        )));
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    let mut rows = 0;
    for &modulation in &spec.modulations {
        for d_main in spec.d_main.points() {
            let d_aux = match spec.d_aux {
                AuxDistance::Fixed(d) => d,
                AuxDistance::Equal => d_main,
            };
            let mut link = LinkConfig::baseline(modulation, d_main, d_aux);
            link.k = spec.k;
            link.symbol_bits = spec.symbol_bits;
            link.fec_rate = spec.fec_rate;
            let head = [modulation.name().to_owned(), d_main.to_string(), d_aux.to_string()];
            match plan_link(profile, &link, spec.r_mode) {
                Ok(plan) => {
                    let r = match spec.r_mode {
                        RedundancyMode::Integer => plan.r.to_string(),
                        RedundancyMode::Fractional => plan.r_exact.to_string(),
                    };
                    let tail = [
                        plan.p_e.to_string(),
                        plan.p_s.to_string(),
                        r,
                        plan.r_l.to_string(),
                        plan.c_aux_bps.to_string(),
                    ];
                    writer.write_record(head.iter().chain(&tail))?;
                }
                Err(e) if spec.on_error == OnError::Mark => {
                    eprintln!("warning: {modulation} at d_main={d_main} cm: {e}");
                    writer.write_record(head.iter().map(String::as_str).chain([ERROR_MARKER; 5]))?;
                }
                Err(e) => return Err(e.into()),
            }
            rows += 1;
        }
    }
    writer.flush().map_err(|e| CliError::io("<csv output>", e))?;
    Ok(rows)
}
