// SPDX-License-Identifier: Apache-2.0

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{gauss_jordan_solve, Generation, Symbol};
use crate::gf256::{mul_add_slice, Gf256};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    /// Unmodified source symbol at this position of the generation.
    Native(usize),
    /// The n-th redundant combination.
    Redundant(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedSymbol {
    pub kind: SymbolKind,
    pub coefficients: Vec<Gf256>,
    pub payload: Symbol,
}

impl CodedSymbol {
    /// Rebuilds a symbol on the receive side from its transported header:
    /// natives get a unit vector, redundant symbols re-derive theirs from the
    /// generation seed.
    pub fn from_header(kind: SymbolKind, seed: u64, k: usize, payload: Symbol) -> Self {
        let coefficients = match kind {
            SymbolKind::Native(pos) => unit_vector(pos, k),
            SymbolKind::Redundant(idx) => coefficient_vector(seed, idx, k),
        };
        Self {
            kind,
            coefficients,
            payload,
        }
    }

    pub fn is_native(&self) -> bool {
        matches!(self.kind, SymbolKind::Native(_))
    }
}

/// `N = K + R` symbols produced from one generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodedGeneration {
    pub index: u64,
    /// Seed of the coefficient generator; sent alongside the symbols.
    pub seed: u64,
    pub native: Vec<CodedSymbol>,
    pub redundant: Vec<CodedSymbol>,
}

impl CodedGeneration {
    pub fn k(&self) -> usize {
        self.native.len()
    }

    pub fn r(&self) -> usize {
        self.redundant.len()
    }

    pub fn n(&self) -> usize {
        self.k() + self.r()
    }

    /// Natives first, then redundant symbols.
    pub fn symbols(&self) -> impl Iterator<Item = &CodedSymbol> {
        self.native.iter().chain(&self.redundant)
    }
}

/// Coefficient vector of redundant symbol `index` under `seed`.
///
/// Each entry is uniform over all 256 field values, drawn from ChaCha8 seeded
/// with `seed` on stream `index`, so any single vector can be regenerated
/// without the others.
pub fn coefficient_vector(seed: u64, index: usize, k: usize) -> Vec<Gf256> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut bytes = vec![0u8; k];
    rng.fill_bytes(&mut bytes);
    bytes.into_iter().map(Gf256).collect()
}

/// Per-generation seed derived from a stream-level seed (SplitMix64 finalizer).
pub fn generation_seed(base: u64, generation: u64) -> u64 {
    let mut z = base ^ generation.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_vector(pos: usize, k: usize) -> Vec<Gf256> {
    let mut v = vec![Gf256::ZERO; k];
    v[pos] = Gf256::ONE;
    v
}

/// Systematic encoding: the `K` natives pass through and `r` redundant
/// symbols are appended.
pub fn encode_generation(generation: &Generation, r: usize, seed: u64) -> CodedGeneration {
    let k = generation.k();
    let natives = generation.symbols();
    let sym_len = natives[0].len();

    let native = natives
        .iter()
        .enumerate()
        .map(|(pos, payload)| CodedSymbol {
            kind: SymbolKind::Native(pos),
            coefficients: unit_vector(pos, k),
            payload: payload.clone(),
        })
        .collect();

    let redundant = (0..r)
        .map(|idx| {
            let coefficients = coefficient_vector(seed, idx, k);
            let mut payload = vec![0u8; sym_len];
            for (c, src) in coefficients.iter().zip(natives) {
                mul_add_slice(&mut payload, src, *c);
            }
            CodedSymbol {
                kind: SymbolKind::Redundant(idx),
                coefficients,
                payload,
            }
        })
        .collect();

    CodedGeneration {
        index: generation.index(),
        seed,
        native,
        redundant,
    }
}

/// Recovers the `k` native payloads from any received subset.
///
/// Natives that arrived are taken as-is; their contribution is subtracted
/// from each redundant symbol and only the missing positions go through
/// Gauss-Jordan elimination.
pub fn decode_generation(received: &[CodedSymbol], k: usize) -> Result<Vec<Symbol>> {
    if k == 0 {
        return Err(Error::config("generation size K must be at least 1"));
    }
    if received.len() < k {
        return Err(Error::InsufficientSymbols {
            received: received.len(),
            needed: k,
        });
    }
    let sym_len = received[0].payload.len();
    for s in received {
        if s.coefficients.len() != k || s.payload.len() != sym_len {
            return Err(Error::config(format!(
                "received symbol {:?} does not match K = {k} / {sym_len}-byte payloads",
                s.kind
            )));
        }
    }

    let mut known: Vec<Option<&Symbol>> = vec![None; k];
    let mut redundant = Vec::new();
    for s in received {
        match s.kind {
            SymbolKind::Native(pos) if pos < k => known[pos] = Some(&s.payload),
            SymbolKind::Native(pos) => {
                return Err(Error::config(format!("native position {pos} out of range for K = {k}")))
            }
            SymbolKind::Redundant(_) => redundant.push(s),
        }
    }

    let missing: Vec<usize> = (0..k).filter(|&i| known[i].is_none()).collect();
    let have = k - missing.len();
    if have + redundant.len() < k {
        return Err(Error::InsufficientSymbols {
            received: have + redundant.len(),
            needed: k,
        });
    }

    if !missing.is_empty() {
        let mut rows = Vec::with_capacity(redundant.len());
        let mut rhs = Vec::with_capacity(redundant.len());
        for s in &redundant {
            let mut payload = s.payload.clone();
            for (c, native) in s.coefficients.iter().zip(&known) {
                if let Some(native) = native {
                    mul_add_slice(&mut payload, native, *c);
                }
            }
            rows.push(missing.iter().map(|&i| s.coefficients[i]).collect());
            rhs.push(payload);
        }
        let solved = gauss_jordan_solve(rows, rhs, missing.len()).map_err(|e| match e {
            Error::RankDeficient { rank, .. } => Error::RankDeficient {
                rank: have + rank,
                needed: k,
            },
            other => other,
        })?;
        let mut out: Vec<Symbol> = known.iter().map(|s| s.cloned().unwrap_or_default()).collect();
        for (pos, payload) in missing.into_iter().zip(solved) {
            out[pos] = payload;
        }
        return Ok(out);
    }

    Ok(known.into_iter().map(|s| s.expect("all present").clone()).collect())
}
