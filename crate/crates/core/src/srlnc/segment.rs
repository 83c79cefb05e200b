// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::{symbol_bytes, Symbol};
use crate::{Error, Result};

/// `K` native symbols coded together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    index: u64,
    symbol_bits: usize,
    symbols: Vec<Symbol>,
}

impl Generation {
    pub fn new(index: u64, symbol_bits: usize, symbols: Vec<Symbol>) -> Result<Self> {
        let len = symbol_bytes(symbol_bits)?;
        if symbols.is_empty() {
            return Err(Error::config("a generation needs at least one symbol"));
        }
        if let Some(bad) = symbols.iter().position(|s| s.len() != len) {
            return Err(Error::config(format!(
                "symbol {bad} has {} bytes, expected {len}",
                symbols[bad].len()
            )));
        }
        Ok(Self {
            index,
            symbol_bits,
            symbols,
        })
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    /// Generation size `K`.
    pub fn k(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol_bits(&self) -> usize {
        self.symbol_bits
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }
}

/// Everything needed to strip padding after decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamLayout {
    pub original_len: usize,
    pub symbol_bits: usize,
    pub k: usize,
    pub generations: usize,
    /// Zero bytes appended after the input to fill the last generation.
    pub padding_bytes: usize,
}

impl StreamLayout {
    /// Symbols in the last generation that are made entirely of padding.
    pub fn padding_symbols(&self) -> usize {
        self.padding_bytes / (self.symbol_bits / 8)
    }
}

#[derive(Debug, Clone)]
pub struct Segmented {
    pub generations: Vec<Generation>,
    pub layout: StreamLayout,
}

/// Splits `data` into generations of `k` symbols of `symbol_bits` bits,
/// zero-padding the tail.
pub fn segment_stream(data: &[u8], symbol_bits: usize, k: usize) -> Result<Segmented> {
    let sym_len = symbol_bytes(symbol_bits)?;
    if k == 0 {
        return Err(Error::config("generation size K must be at least 1"));
    }
    let gen_len = sym_len * k;
    let generations: Vec<Generation> = data
        .chunks(gen_len)
        .enumerate()
        .map(|(index, chunk)| {
            let mut buf = chunk.to_vec();
            buf.resize(gen_len, 0);
            let symbols = buf.chunks(sym_len).map(<[u8]>::to_vec).collect();
            Generation {
                index: index as u64,
                symbol_bits,
                symbols,
            }
        })
        .collect();
    let layout = StreamLayout {
        original_len: data.len(),
        symbol_bits,
        k,
        generations: generations.len(),
        padding_bytes: generations.len() * gen_len - data.len(),
    };
    Ok(Segmented {
        generations,
        layout,
    })
}

/// Concatenates decoded generations (in order) and strips the padding.
pub fn reassemble<I, G>(layout: &StreamLayout, generations: I) -> Result<Vec<u8>>
where
    I: IntoIterator<Item = G>,
    G: AsRef<[Symbol]>,
{
    let sym_len = symbol_bytes(layout.symbol_bits)?;
    let mut out = Vec::with_capacity(layout.original_len + layout.padding_bytes);
    let mut count = 0;
    for generation in generations {
        let symbols = generation.as_ref();
        if symbols.len() != layout.k || symbols.iter().any(|s| s.len() != sym_len) {
            return Err(Error::config(format!(
                "generation {count} does not match layout (K = {}, {sym_len} bytes/symbol)",
                layout.k
            )));
        }
        symbols.iter().for_each(|s| out.extend_from_slice(s));
        count += 1;
    }
    if count != layout.generations {
        return Err(Error::config(format!(
            "expected {} generations, got {count}",
            layout.generations
        )));
    }
    out.truncate(layout.original_len);
    Ok(out)
}
