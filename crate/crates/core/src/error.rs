// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero has no multiplicative inverse in GF(256)")]
    ZeroInverse,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("insufficient symbols: received {received}, need {needed}")]
    InsufficientSymbols { received: usize, needed: usize },

    #[error("rank-deficient system: rank {rank}, need {needed}")]
    RankDeficient { rank: usize, needed: usize },

    #[error("invalid channel profile: {0}")]
    Profile(String),

    #[error("distance {distance_cm} cm outside profile coverage [{min_cm}, {max_cm}] cm for {modulation}")]
    OutOfRange {
        modulation: String,
        distance_cm: f64,
        min_cm: f64,
        max_cm: f64,
    },

    #[error(
        "auxiliary distance {d_aux_cm} cm infeasible: must be strictly below {limit_cm} cm (auxiliary-distance bound)"
    )]
    InfeasibleDistance { d_aux_cm: f64, limit_cm: f64 },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }

    pub(crate) fn profile(msg: impl Into<String>) -> Self {
        Self::Profile(msg.into())
    }
}
