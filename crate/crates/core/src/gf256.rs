// SPDX-License-Identifier: Apache-2.0

//! Arithmetic over GF(2^8).
//!
//! Elements are bytes; addition is XOR and multiplication is polynomial
//! multiplication reduced modulo x^8 + x^4 + x^3 + x^2 + 1 (0x11D). The
//! log/antilog tables are built at compile time with generator `x` (0x02),
//! which is primitive for this polynomial.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Sub};

use crate::error::{Error, Result};

/// Full reduction polynomial, including the x^8 term.
pub const REDUCTION_POLY: u16 = 0x11D;

static EXP: [u8; 512] = build_exp_table();
static LOG: [u8; 256] = build_log_table();

const fn build_exp_table() -> [u8; 512] {
    let mut table = [0u8; 512];
    let mut val: u16 = 1;
    let mut i = 0;
    while i < 255 {
        table[i] = val as u8;
        table[i + 255] = val as u8;
        val <<= 1;
        if val & 0x100 != 0 {
            val ^= REDUCTION_POLY;
        }
        i += 1;
    }
    table[510] = table[0];
    table[511] = table[1];
    table
}

const fn build_log_table() -> [u8; 256] {
    let exp = build_exp_table();
    let mut table = [0u8; 256];
    let mut i = 0;
    while i < 255 {
        table[exp[i] as usize] = i as u8;
        i += 1;
    }
    table
}

/// An element of GF(2^8).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Gf256(pub u8);

impl Gf256 {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    #[inline]
    pub const fn new(value: u8) -> Self {
        Self(value)
    }

    #[inline]
    pub const fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse. Zero has none.
    pub fn inv(self) -> Result<Self> {
        if self.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(Self(EXP[255 - LOG[self.0 as usize] as usize]))
    }
}

impl fmt::Debug for Gf256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf256({:#04x})", self.0)
    }
}

impl From<u8> for Gf256 {
    fn from(value: u8) -> Self {
        Self(value)
    }
}

impl From<Gf256> for u8 {
    fn from(value: Gf256) -> Self {
        value.0
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Add for Gf256 {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

// addition in characteristic 2 is XOR
#[allow(clippy::suspicious_op_assign_impl)]
impl AddAssign for Gf256 {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        self.0 ^= rhs.0;
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Sub for Gf256 {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 ^ rhs.0)
    }
}

impl Mul for Gf256 {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self(mul_u8(self.0, rhs.0))
    }
}

impl MulAssign for Gf256 {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        self.0 = mul_u8(self.0, rhs.0);
    }
}

/// Panics on division by zero, like integer division.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for Gf256 {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        self * rhs.inv().expect("division by zero in GF(256)")
    }
}

#[inline]
fn mul_u8(a: u8, b: u8) -> u8 {
    if a == 0 || b == 0 {
        return 0;
    }
    EXP[LOG[a as usize] as usize + LOG[b as usize] as usize]
}

/// Field addition (XOR).
#[inline]
pub fn gf_add(a: Gf256, b: Gf256) -> Gf256 {
    a + b
}

/// Field multiplication.
#[inline]
pub fn gf_mul(a: Gf256, b: Gf256) -> Gf256 {
    a * b
}

/// Field inverse; `Err(Error::ZeroInverse)` for zero.
#[inline]
pub fn gf_inv(a: Gf256) -> Result<Gf256> {
    a.inv()
}

/// `dst[i] += coef * src[i]` over byte slices of equal length.
pub fn mul_add_slice(dst: &mut [u8], src: &[u8], coef: Gf256) {
    debug_assert_eq!(dst.len(), src.len());
    match coef.0 {
        0 => {}
        1 => dst.iter_mut().zip(src).for_each(|(d, s)| *d ^= s),
        c => {
            let log_c = LOG[c as usize] as usize;
            for (d, &s) in dst.iter_mut().zip(src) {
                if s != 0 {
                    *d ^= EXP[log_c + LOG[s as usize] as usize];
                }
            }
        }
    }
}

/// `buf[i] *= coef` in place.
pub fn scale_slice(buf: &mut [u8], coef: Gf256) {
    match coef.0 {
        0 => buf.fill(0),
        1 => {}
        c => {
            let log_c = LOG[c as usize] as usize;
            for b in buf.iter_mut().filter(|b| **b != 0) {
                *b = EXP[log_c + LOG[*b as usize] as usize];
            }
        }
    }
}
