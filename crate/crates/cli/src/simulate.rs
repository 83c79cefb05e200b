// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

use srlnc_core::simulator::{run_simulation, ErrorMode, SimReport};

use crate::config::LoadedRun;
use crate::error::Result;

/// Command-line overrides of the config's `[simulation]` table.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimOverrides {
    pub generations: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<ErrorMode>,
}

pub fn simulate(run: &LoadedRun, profile: Option<&Path>, overrides: SimOverrides) -> Result<SimReport> {
    let mut cfg = run.sim_config();
    if let Some(n) = overrides.generations {
        cfg.generations = n;
    }
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(mode) = overrides.mode {
        cfg.mode = mode;
    }
    // the profile is only read when the config leaves the BER open
    let needs_profile = cfg.ber.is_none() && !(cfg.mode == ErrorMode::Symbol && cfg.symbol_error_rate.is_some());
    let profile = if needs_profile { run.profile(profile)? } else { None };
    Ok(run_simulation(&cfg, profile.as_ref())?)
}
