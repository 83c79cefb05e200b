// SPDX-License-Identifier: Apache-2.0

//! Gauss-Jordan elimination over GF(2^8) with byte-vector right-hand sides.

use super::Symbol;
use crate::gf256::{mul_add_slice, scale_slice, Gf256};
use crate::{Error, Result};

/// Solves `matrix · x = rhs` for `width` unknowns by reduction to RREF.
///
/// Each row of `matrix` must have `width` entries and pair with one `rhs`
/// payload. Extra rows are allowed. Returns the `width` solution payloads, or
/// [`Error::RankDeficient`] carrying the rank that was reached.
pub fn gauss_jordan_solve(
    mut matrix: Vec<Vec<Gf256>>,
    mut rhs: Vec<Symbol>,
    width: usize,
) -> Result<Vec<Symbol>> {
    if matrix.len() != rhs.len() {
        return Err(Error::config(format!(
            "{} coefficient rows but {} payloads",
            matrix.len(),
            rhs.len()
        )));
    }
    if matrix.iter().any(|row| row.len() != width) {
        return Err(Error::config(format!("coefficient rows must have width {width}")));
    }

    let rank = reduce(&mut matrix, Some(&mut rhs), width);
    if rank < width {
        return Err(Error::RankDeficient {
            rank,
            needed: width,
        });
    }
    rhs.truncate(width);
    Ok(rhs)
}

/// Rank of a coefficient matrix (rows may be any common width).
pub fn rank(rows: &[Vec<Gf256>]) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    reduce(&mut m, None, width)
}

fn reduce(m: &mut [Vec<Gf256>], mut rhs: Option<&mut Vec<Symbol>>, width: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    for col in 0..width {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        if let Some(rhs) = rhs.as_deref_mut() {
            rhs.swap(rank, pivot);
        }

        let inv = m[rank][col].inv().expect("pivot is nonzero");
        if inv != Gf256::ONE {
            for v in &mut m[rank][col..] {
                *v *= inv;
            }
            if let Some(rhs) = rhs.as_deref_mut() {
                scale_slice(&mut rhs[rank], inv);
            }
        }

        let pivot_row = m[rank].clone();
        let pivot_rhs = rhs.as_deref().map(|r| r[rank].clone());
        for r in (0..rows).filter(|&r| r != rank) {
            let factor = m[r][col];
            if factor.is_zero() {
                continue;
            }
            for (v, &p) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *v += factor * p;
            }
            if let (Some(rhs), Some(p)) = (rhs.as_deref_mut(), pivot_rhs.as_ref()) {
                mul_add_slice(&mut rhs[r], p, factor);
            }
        }
        rank += 1;
    }
    rank
}
