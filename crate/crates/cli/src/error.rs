// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use srlnc_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes. Usage errors exit with 2 through clap.
pub mod exit {
    pub const IO: u8 = 1;
    pub const CONFIG: u8 = 3;
    pub const PROFILE: u8 = 4;
    pub const INFEASIBLE: u8 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io { .. } | Self::Csv(_) => exit::IO,
            Self::Config(_) => exit::CONFIG,
            Self::Core(e) => match e {
                CoreError::Profile(_) | CoreError::OutOfRange { .. } => exit::PROFILE,
                CoreError::InfeasibleDistance { .. } => exit::INFEASIBLE,
                _ => exit::CONFIG,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
