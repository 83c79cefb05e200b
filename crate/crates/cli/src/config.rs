// SPDX-License-Identifier: Apache-2.0

//! Run configuration files and channel-profile resolution.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use srlnc_core::planner::{AuxThz, Channel, ChannelProfile, LinkConfig, Modulation, RedundancyMode, SPEED_OF_LIGHT};
use srlnc_core::simulator::{ErrorMode, SimConfig};

use crate::error::{CliError, Result};

/// Colon-separated (platform path-list) directories searched for
/// `channel_<id>.toml` before the built-in profiles.
pub const PROFILE_DIR_ENV: &str = "SRLNC_PROFILE_DIR";

fn default_k() -> usize {
    100
}

fn default_symbol_bits() -> usize {
    8
}

fn default_fec_rate() -> f64 {
    0.73
}

fn default_generations() -> usize {
    1000
}

/// Shared by `plan` and `simulate`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFile {
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_symbol_bits")]
    pub symbol_bits: usize,
    #[serde(default = "default_fec_rate")]
    pub fec_rate: f64,
    pub modulation: Modulation,
    pub d_main_cm: f64,
    pub d_aux_cm: f64,
    pub main_rate_bps: Option<f64>,
    pub propagation_speed: Option<f64>,
    pub aux_thz: Option<AuxThz>,
    /// Selects the channel profile searched for by name.
    pub channel: Option<Channel>,
    /// Explicit profile path, relative to the config file.
    pub profile: Option<PathBuf>,
    /// Known main-channel BER; skips the profile lookup.
    pub ber: Option<f64>,
    #[serde(default)]
    pub r_mode: RedundancyMode,
    #[serde(default)]
    pub simulation: SimSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSection {
    #[serde(default = "default_generations")]
    pub generations: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: ErrorMode,
    pub symbol_error_rate: Option<f64>,
    pub redundancy: Option<usize>,
    pub aux_rate_bps: Option<f64>,
    #[serde(default)]
    pub aux_erasure_rate: f64,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            generations: default_generations(),
            seed: 0,
            mode: ErrorMode::default(),
            symbol_error_rate: None,
            redundancy: None,
            aux_rate_bps: None,
            aux_erasure_rate: 0.0,
        }
    }
}

/// A parsed config together with the directory it was read from.
#[derive(Debug, Clone)]
pub struct LoadedRun {
    pub file: RunFile,
    pub base_dir: PathBuf,
}

impl LoadedRun {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: RunFile =
            toml::from_str(&text).map_err(|e| CliError::config(format!("{}: {}", path.display(), e.message())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { file, base_dir })
    }

    pub fn link(&self) -> LinkConfig {
        let f = &self.file;
        LinkConfig {
            k: f.k,
            symbol_bits: f.symbol_bits,
            fec_rate: f.fec_rate,
            modulation: f.modulation,
            main_rate_bps: f.main_rate_bps,
            d_main_cm: f.d_main_cm,
            d_aux_cm: f.d_aux_cm,
            propagation_speed: f.propagation_speed.unwrap_or(SPEED_OF_LIGHT),
            aux_thz: f.aux_thz,
        }
    }

    pub fn sim_config(&self) -> SimConfig {
        let s = &self.file.simulation;
        let mut cfg = SimConfig::new(self.link(), s.generations, s.mode, s.seed);
        cfg.ber = self.file.ber;
        cfg.symbol_error_rate = s.symbol_error_rate;
        cfg.redundancy = s.redundancy;
        cfg.aux_rate_bps = s.aux_rate_bps;
        cfg.aux_erasure_rate = s.aux_erasure_rate;
        cfg
    }

    /// The profile named by `--profile`, the config's `profile` or its
    /// `channel`, in that order of precedence.
    pub fn profile(&self, cli_override: Option<&Path>) -> Result<Option<ChannelProfile>> {
        if let Some(path) = cli_override {
            return load_profile(path, self.file.channel).map(Some);
        }
        if let Some(rel) = &self.file.profile {
            return load_profile(&self.base_dir.join(rel), self.file.channel).map(Some);
        }
        self.file.channel.map(find_profile).transpose()
    }
}

/// Reads a profile file, checking its channel id when one is expected.
pub fn load_profile(path: &Path, expected: Option<Channel>) -> Result<ChannelProfile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let profile = ChannelProfile::from_toml_str(&text)?;
    if let Some(channel) = expected {
        if profile.channel_id != channel {
            return Err(CliError::config(format!(
                "{} holds channel {}, expected {channel}",
                path.display(),
                profile.channel_id
            )));
        }
    }
    Ok(profile)
}

/// Searches the profile directories, then falls back to the built-in profile.
pub fn find_profile(channel: Channel) -> Result<ChannelProfile> {
    let name = ChannelProfile::file_name(channel);
    if let Some(dirs) = env::var_os(PROFILE_DIR_ENV) {
        for dir in env::split_paths(&dirs) {
            let candidate = dir.join(&name);
            if candidate.is_file() {
                return load_profile(&candidate, Some(channel));
            }
        }
    }
    Ok(ChannelProfile::builtin(channel))
}
