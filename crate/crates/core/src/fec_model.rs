// SPDX-License-Identifier: Apache-2.0

//! Analytical model of a generic FEC layer of rate `R_F`.
//!
//! The FEC expands a generation of `K·s` bits to `K·s / R_F` bits. Its
//! minimum Hamming distance is taken as the number of added bits, from which
//! the correctable-bit budget `t_k` follows. Residual bit errors after FEC are
//! `P_b = max(0, (K·s·p_e − R_F·t_k) / (K·s))`, and a symbol survives only if
//! all of its `s` bits do: `P_s = 1 − (1 − P_b)^s`.
//!
//! [`fec_filter`] is a stochastic stand-in for a real decoder that produces
//! symbol erasures with the same long-run rate.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Slack used when rounding `K·s / R_F` up to whole bits, so that exact
/// quotients (80 / 0.8) are not pushed to the next integer by representation
/// error.
const CEIL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FecParams {
    /// Generation size `K` in symbols.
    pub k: usize,
    /// Symbol size `s` in bits.
    pub symbol_bits: usize,
    /// FEC code rate `R_F` in (0, 1].
    pub code_rate: f64,
}

impl FecParams {
    pub fn new(k: usize, symbol_bits: usize, code_rate: f64) -> Result<Self> {
        validate_rate(code_rate)?;
        if k == 0 {
            return Err(Error::config("generation size K must be at least 1"));
        }
        if symbol_bits == 0 {
            return Err(Error::config("symbol size must be at least 1 bit"));
        }
        Ok(Self {
            k,
            symbol_bits,
            code_rate,
        })
    }

    /// `K·s`, the native bits of one generation.
    pub fn native_bits(&self) -> u64 {
        (self.k * self.symbol_bits) as u64
    }

    /// `K·s / R_F` rounded up to whole bits.
    pub fn expanded_bits(&self) -> u64 {
        ceil_bits(self.native_bits() as f64 / self.code_rate)
    }

    pub fn delta_min(&self) -> u64 {
        self.expanded_bits() - self.native_bits()
    }

    pub fn t_k(&self) -> u64 {
        correctable_bits(self.delta_min())
    }
}

fn validate_rate(code_rate: f64) -> Result<()> {
    if !(code_rate > 0.0 && code_rate <= 1.0) {
        return Err(Error::config(format!("FEC code rate must be in (0, 1], got {code_rate}")));
    }
    Ok(())
}

fn ceil_bits(x: f64) -> u64 {
    (x - CEIL_SLACK).ceil().max(0.0) as u64
}

/// Minimum Hamming distance `⌈K·s / R_F − K·s⌉` in bits.
pub fn hamming_distance_min(k: usize, symbol_bits: usize, code_rate: f64) -> Result<u64> {
    validate_rate(code_rate)?;
    let native = (k * symbol_bits) as f64;
    Ok(ceil_bits(native / code_rate - native))
}

/// Bits the FEC can correct for a given minimum distance.
pub fn correctable_bits(delta_min: u64) -> u64 {
    if delta_min.is_multiple_of(2) {
        delta_min.saturating_sub(2) / 2
    } else {
        (delta_min - 1) / 2
    }
}

/// Residual bit error rate after FEC, clamped at zero.
pub fn residual_ber(p_e: f64, params: &FecParams) -> Result<f64> {
    check_probability("channel BER", p_e)?;
    let native = params.native_bits() as f64;
    let corrected = params.code_rate * params.t_k() as f64;
    Ok(((native * p_e - corrected) / native).max(0.0))
}

/// Channel BER at which the residual BER reaches zero, `R_F·t_k / (K·s)`.
pub fn ber_threshold(params: &FecParams) -> f64 {
    params.code_rate * params.t_k() as f64 / params.native_bits() as f64
}

/// Residual symbol error rate for `s`-bit symbols. `p_b` must lie in [0, 1].
pub fn residual_ser(p_b: f64, symbol_bits: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p_b), "P_b = {p_b}");
    1.0 - (1.0 - p_b).powi(symbol_bits as i32)
}

fn check_probability(what: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("{what} must be in [0, 1], got {p}")));
    }
    Ok(())
}

/// Evaluated residual-error chain for one channel BER.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualErrorModel {
    pub delta_min: u64,
    pub t_k: u64,
    pub p_b: f64,
    pub p_s: f64,
}

impl ResidualErrorModel {
    pub fn evaluate(p_e: f64, params: &FecParams) -> Result<Self> {
        let p_b = residual_ber(p_e, params)?;
        Ok(Self {
            delta_min: params.delta_min(),
            t_k: params.t_k(),
            p_b,
            p_s: residual_ser(p_b, params.symbol_bits),
        })
    }
}

/// How many bit errors per expanded generation the FEC stub removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorrectionBudget {
    Bits(u64),
    /// Every error is corrected.
    Unlimited,
}

impl From<u64> for CorrectionBudget {
    fn from(bits: u64) -> Self {
        Self::Bits(bits)
    }
}

/// Seeded wrapper around [`fec_filter_with`].
pub fn fec_filter(
    params: &FecParams,
    p_e: f64,
    budget: CorrectionBudget,
    seed: u64,
) -> Result<Vec<bool>> {
    fec_filter_with(params, p_e, budget, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Bit-level FEC stub for one generation. Returns one flag per native
/// symbol, `true` if it survived.
///
/// Draws `e ~ Binomial(⌈K·s/R_F⌉, p_e)` channel errors over the expanded
/// block. If `e ≤ t_k` everything is corrected; otherwise the `e − t_k`
/// leftover errors land on distinct positions chosen uniformly over the
/// expanded block, and each native symbol hit at least once is erased. Since
/// a fraction `R_F` of the block is native data, the expected number of
/// native residual errors is `K·s·p_e − R_F·t_k`, matching the closed form.
pub fn fec_filter_with<R: Rng + ?Sized>(
    params: &FecParams,
    p_e: f64,
    budget: CorrectionBudget,
    rng: &mut R,
) -> Result<Vec<bool>> {
    check_probability("channel BER", p_e)?;
    let mut survived = vec![true; params.k];
    let t_k = match budget {
        CorrectionBudget::Unlimited => return Ok(survived),
        CorrectionBudget::Bits(t) => t,
    };
    let expanded = params.expanded_bits();
    let errors = Binomial::new(expanded, p_e)
        .map_err(|e| Error::domain(e.to_string()))?
        .sample(rng);
    if errors <= t_k {
        return Ok(survived);
    }
    let residual = (errors - t_k) as usize;
    let native = params.native_bits() as usize;
    for pos in index::sample(rng, expanded as usize, residual) {
        if pos < native {
            survived[pos / params.symbol_bits] = false;
        }
    }
    Ok(survived)
}
