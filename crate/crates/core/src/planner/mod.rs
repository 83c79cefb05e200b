// SPDX-License-Identifier: Apache-2.0

//! Link sizing for a main channel carrying native symbols and an error-free
//! auxiliary channel carrying the redundancy.
//!
//! Given the main channel's expected BER, the planner derives the residual
//! symbol error rate, the redundancy `R ≥ P_s·K`, the sRLNC code rate
//! `K / (K + R)`, and the auxiliary rate at which one generation's redundancy
//! arrives at the same instant as its natives:
//!
//! ```text
//! C_aux = R·s·c_p·C_main / (R_F·C_main·(d_main − d_aux) + c_p·K·s)
//! ```
//!
//! which is only positive while `d_aux < K·s·c_p / (R_F·C_main) + d_main`.
//!
//! Distances are in centimetres at the API and converted to metres inside.

mod feasibility;
mod profile;

pub use feasibility::{aux_feasibility, AUX_FEASIBILITY_TABLE};
pub use profile::{lookup_ber, Channel, ChannelProfile, Modulation, ProfileEntry};

use serde::{Deserialize, Serialize};

use crate::fec_model::{FecParams, ResidualErrorModel};
use crate::{Error, Result};

/// Propagation speed `c_p` in m/s.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Main-channel rate per modulation is `2·10^11 · 2^M` bps.
const MAIN_RATE_UNIT_BPS: f64 = 2.0e11;

const CEIL_SLACK: f64 = 1e-9;

/// Main-channel transmission rate for a modulation, in bps.
pub fn main_rate(modulation: Modulation) -> f64 {
    MAIN_RATE_UNIT_BPS * f64::from(1u32 << modulation.bits_per_symbol())
}

/// Declares the auxiliary channel to be a THz link, enabling the
/// BER→0 distance check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxThz {
    pub channel: Channel,
    pub modulation: Modulation,
}

fn default_speed() -> f64 {
    SPEED_OF_LIGHT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    /// Generation size `K`.
    pub k: usize,
    /// Symbol size `s` in bits.
    pub symbol_bits: usize,
    /// FEC code rate `R_F`.
    pub fec_rate: f64,
    /// Main-channel modulation.
    pub modulation: Modulation,
    /// Overrides the modulation-derived main-channel rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub main_rate_bps: Option<f64>,
    pub d_main_cm: f64,
    pub d_aux_cm: f64,
    #[serde(default = "default_speed")]
    pub propagation_speed: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_thz: Option<AuxThz>,
}

impl LinkConfig {
    /// `K = 100`, `s = 8`, `R_F = 0.73`.
    pub fn baseline(modulation: Modulation, d_main_cm: f64, d_aux_cm: f64) -> Self {
        Self {
            k: 100,
            symbol_bits: 8,
            fec_rate: 0.73,
            modulation,
            main_rate_bps: None,
            d_main_cm,
            d_aux_cm,
            propagation_speed: SPEED_OF_LIGHT,
            aux_thz: None,
        }
    }

    pub fn c_main(&self) -> f64 {
        self.main_rate_bps.unwrap_or_else(|| main_rate(self.modulation))
    }

    pub fn fec(&self) -> Result<FecParams> {
        FecParams::new(self.k, self.symbol_bits, self.fec_rate)
    }

    /// `K·s` as a float.
    fn generation_bits(&self) -> f64 {
        (self.k * self.symbol_bits) as f64
    }

    pub fn validate(&self) -> Result<()> {
        self.fec()?;
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("d_main_cm", self.d_main_cm)?;
        positive("d_aux_cm", self.d_aux_cm)?;
        positive("main channel rate", self.c_main())?;
        positive("propagation speed", self.propagation_speed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RedundancyMode {
    /// Whole symbols, `⌈P_s·K⌉`.
    #[default]
    #[serde(rename = "int")]
    Integer,
    /// The exact `P_s·K`.
    #[serde(rename = "frac")]
    Fractional,
}

impl std::str::FromStr for RedundancyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "int" | "integer" => Ok(Self::Integer),
            "frac" | "fractional" => Ok(Self::Fractional),
            other => Err(Error::config(format!("unknown redundancy mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub p_e: f64,
    pub delta_min: u64,
    pub t_k: u64,
    pub p_b: f64,
    pub p_s: f64,
    pub r_exact: f64,
    pub r: usize,
    pub mode: RedundancyMode,
    /// Code rate `K / (K + R)` for the redundancy of `mode`.
    pub r_l: f64,
    pub c_main_bps: f64,
    pub c_aux_bps: f64,
    pub d_aux_limit_cm: f64,
    pub t_main_s: f64,
    pub t_aux_s: f64,
    /// Set when a THz auxiliary channel is longer than its BER→0 range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_warning: Option<String>,
}

impl PlanResult {
    /// Redundancy as used for `r_l` and `c_aux_bps`.
    pub fn redundancy(&self) -> f64 {
        match self.mode {
            RedundancyMode::Integer => self.r as f64,
            RedundancyMode::Fractional => self.r_exact,
        }
    }
}

/// `R_exact = P_s·K` and its ceiling.
pub fn required_redundancy(p_s: f64, k: usize) -> Result<(f64, usize)> {
    if !(0.0..=1.0).contains(&p_s) {
        return Err(Error::domain(format!("P_s must be in [0, 1], got {p_s}")));
    }
    let exact = p_s * k as f64;
    Ok((exact, (exact - CEIL_SLACK).ceil().max(0.0) as usize))
}

/// sRLNC code rate `K / (K + R)`.
pub fn code_rate(k: usize, r: f64) -> f64 {
    k as f64 / (k as f64 + r)
}

/// Exclusive upper bound on the auxiliary distance, in cm.
pub fn max_aux_distance(config: &LinkConfig) -> f64 {
    let margin_m =
        config.generation_bits() * config.propagation_speed / (config.fec_rate * config.c_main());
    config.d_main_cm + margin_m * 100.0
}

/// Auxiliary rate (bps) that makes redundancy and natives of one generation
/// arrive together. Zero redundancy needs no auxiliary channel.
pub fn aux_rate(config: &LinkConfig, r: f64) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    let limit_cm = max_aux_distance(config);
    let c_main = config.c_main();
    let c_p = config.propagation_speed;
    let s = config.symbol_bits as f64;
    let denom = config.fec_rate * c_main * (config.d_main_cm - config.d_aux_cm) / 100.0
        + c_p * config.generation_bits();
    if config.d_aux_cm >= limit_cm || denom <= 0.0 {
        return Err(Error::InfeasibleDistance {
            d_aux_cm: config.d_aux_cm,
            limit_cm,
        });
    }
    Ok(r * s * c_p * c_main / denom)
}

/// Total main-channel delay `K·s / (R_F·C_main) + d_main / c_p`, seconds.
pub fn main_delay(config: &LinkConfig) -> f64 {
    config.generation_bits() / (config.fec_rate * config.c_main())
        + config.d_main_cm / 100.0 / config.propagation_speed
}

/// Total auxiliary delay `R·s / (R_F·C_aux) + d_aux / c_p`, seconds.
pub fn aux_delay(config: &LinkConfig, r: f64, c_aux: f64) -> f64 {
    let propagation = config.d_aux_cm / 100.0 / config.propagation_speed;
    if r == 0.0 {
        return propagation;
    }
    r * config.symbol_bits as f64 / (config.fec_rate * c_aux) + propagation
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Delays {
    pub t_main: f64,
    pub t_aux: f64,
}

/// Both delays with the auxiliary rate planned by [`aux_rate`].
pub fn delays(config: &LinkConfig, r: f64) -> Result<Delays> {
    let c_aux = aux_rate(config, r)?;
    Ok(Delays {
        t_main: main_delay(config),
        t_aux: aux_delay(config, r, c_aux),
    })
}

/// Plans a link from a profile lookup of the main-channel BER.
pub fn plan_link(profile: &ChannelProfile, config: &LinkConfig, mode: RedundancyMode) -> Result<PlanResult> {
    config.validate()?;
    let p_e = lookup_ber(profile, config.modulation, config.d_main_cm)?;
    plan_with_ber(config, p_e, mode)
}

/// Plans a link for a known main-channel BER.
pub fn plan_with_ber(config: &LinkConfig, p_e: f64, mode: RedundancyMode) -> Result<PlanResult> {
    config.validate()?;
    let fec = config.fec()?;
    let model = ResidualErrorModel::evaluate(p_e, &fec)?;
    let (r_exact, r) = required_redundancy(model.p_s, config.k)?;
    let used = match mode {
        RedundancyMode::Integer => r as f64,
        RedundancyMode::Fractional => r_exact,
    };
    let c_aux = aux_rate(config, used)?;
    let aux_warning = config.aux_thz.and_then(|aux| {
        let max = aux_feasibility(aux.channel, aux.modulation);
        (config.d_aux_cm > max).then(|| {
            format!(
                "THz auxiliary channel {} {} reaches BER→0 only up to {max} cm, configured {} cm",
                aux.channel, aux.modulation, config.d_aux_cm
            )
        })
    });
    Ok(PlanResult {
        p_e,
        delta_min: model.delta_min,
        t_k: model.t_k,
        p_b: model.p_b,
        p_s: model.p_s,
        r_exact,
        r,
        mode,
        r_l: code_rate(config.k, used),
        c_main_bps: config.c_main(),
        c_aux_bps: c_aux,
        d_aux_limit_cm: max_aux_distance(config),
        t_main_s: main_delay(config),
        t_aux_s: aux_delay(config, used, c_aux),
        aux_warning,
    })
}
