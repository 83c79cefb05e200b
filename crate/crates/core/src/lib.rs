// SPDX-License-Identifier: Apache-2.0

//! Dual-channel coded transmission: a systematic RLNC codec over GF(2^8), an
//! analytical FEC residual-error model, a link planner for a main channel
//! plus an auxiliary redundancy channel, and a discrete-event simulator of
//! the whole chain.

pub mod error;
pub mod fec_model;
pub mod gf256;
pub mod planner;
pub mod simulator;
pub mod srlnc;

pub use error::{Error, Result};
