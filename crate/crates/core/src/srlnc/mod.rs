// SPDX-License-Identifier: Apache-2.0

//! Systematic random linear network coding over GF(2^8).
//!
//! A byte stream is cut into `s`-bit symbols and grouped into generations of
//! `K` symbols. Encoding leaves the `K` native symbols untouched and appends
//! `R` redundant symbols, each a random linear combination of the natives.
//! Any `K` received symbols whose coefficient vectors are linearly
//! independent recover the generation.
//!
//! Redundant coefficient vectors are not shipped: they are re-derived from the
//! generation seed and the redundant index (see [`coefficient_vector`]).

mod codec;
mod gauss;
mod segment;

pub use codec::{
    coefficient_vector, decode_generation, encode_generation, generation_seed, CodedGeneration,
    CodedSymbol, SymbolKind,
};
pub use gauss::{gauss_jordan_solve, rank};
pub use segment::{reassemble, segment_stream, Generation, Segmented, StreamLayout};

/// One symbol payload, `s / 8` bytes.
pub type Symbol = Vec<u8>;

pub(crate) fn symbol_bytes(symbol_bits: usize) -> crate::Result<usize> {
    if symbol_bits == 0 || !symbol_bits.is_multiple_of(8) {
        return Err(crate::Error::config(format!(
            "symbol size must be a positive multiple of 8 bits, got {symbol_bits}"
        )));
    }
    Ok(symbol_bits / 8)
}
