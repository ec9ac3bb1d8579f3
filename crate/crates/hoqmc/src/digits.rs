//! Base-`p` digit expansions of integer indices.

use crate::error::{Error, Result};
use crate::field::PrimeBase;

/// A finite base-`p` digit expansion, least significant digit first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DigitVector {
    base: PrimeBase,
    digits: Vec<u8>,
}

impl DigitVector {
    /// Wraps raw digits, checking each against the base.
    pub fn new(base: PrimeBase, digits: Vec<u8>) -> Result<Self> {
        if let Some(d) = digits.iter().find(|&&d| d as u32 >= base.value()) {
            return Err(Error::range(format!("digit {d} not below base {base}")));
        }
        Ok(DigitVector { base, digits })
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at position `i` (coefficient of `p^i`); zero past the end.
    pub fn digit(&self, i: usize) -> u8 {
        self.digits.get(i).copied().unwrap_or(0)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.digits
    }

    /// Recomposes the expanded integer.
    pub fn value(&self) -> u64 {
        let p = self.base.value() as u64;
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + d as u64)
    }
}

/// Expands `h` into exactly `length` base-`p` digits, least significant
/// first. `h` must satisfy `h < p^length`.
pub fn expand_index(h: u64, length: u32, base: PrimeBase) -> Result<DigitVector> {
    let cap = base.pow(length)?;
    if h >= cap {
        return Err(Error::range(format!(
            "index {h} needs more than {length} base-{base} digits"
        )));
    }
    Ok(DigitVector {
        base,
        digits: digits_of(h, length, base),
    })
}

/// First `n` base-`p` digits of `k`, least significant first. Digits of `k`
/// beyond position `n` are discarded; short expansions are zero-padded, so
/// any `k` is accepted.
pub fn nu(k: u64, n: u32, base: PrimeBase) -> DigitVector {
    DigitVector {
        base,
        digits: digits_of(k, n, base),
    }
}

fn digits_of(mut value: u64, length: u32, base: PrimeBase) -> Vec<u8> {
    let p = base.value() as u64;
    let mut digits = Vec::with_capacity(length as usize);
    for _ in 0..length {
        digits.push((value % p) as u8);
        value /= p;
    }
    digits
}
