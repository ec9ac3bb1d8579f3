//! The prime digit alphabet shared by every net, point, and character.

use crate::error::{Error, Result};

/// Upper limit for supported bases. Small primes are the only bases used in
/// practice; 31 keeps every digit in a byte with room for sums before
/// reduction.
pub const MAX_BASE: u32 = 31;

/// A prime base `p` with `2 <= p <= 31`.
///
/// All digit expansions, generating-matrix entries, and character exponents
/// are taken modulo this value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeBase(u8);

impl PrimeBase {
    /// Validates primality and range.
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_BASE).contains(&p) {
            return Err(Error::range(format!("base {p} not in 2..={MAX_BASE}")));
        }
        if !is_prime(p) {
            return Err(Error::Validation(format!("base {p} is not prime")));
        }
        Ok(PrimeBase(p as u8))
    }

    /// The common binary case.
    pub const fn two() -> Self {
        PrimeBase(2)
    }

    pub const fn value(self) -> u32 {
        self.0 as u32
    }

    pub const fn is_binary(self) -> bool {
        self.0 == 2
    }

    /// Largest digit count `n` such that `p^n` fits the `u64` numerator word
    /// (capped so that `p^n <= 2^63`).
    pub fn max_digits(self) -> u32 {
        let p = self.0 as u128;
        let cap = 1u128 << 63;
        let mut n = 0;
        let mut value = 1u128;
        while value * p <= cap {
            value *= p;
            n += 1;
        }
        n
    }

    /// `p^n` as an exact `u64`, or a capacity error when `n` exceeds
    /// [`max_digits`](Self::max_digits).
    pub fn pow(self, n: u32) -> Result<u64> {
        if n > self.max_digits() {
            return Err(Error::capacity(format!(
                "{p}^{n} exceeds the 63-bit numerator word (max exponent {m})",
                p = self.0,
                m = self.max_digits()
            )));
        }
        Ok((self.0 as u64).pow(n))
    }

    /// Digit addition modulo `p`.
    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        debug_assert!(a < self.0 && b < self.0);
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    /// Digit multiplication modulo `p`.
    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        debug_assert!(a < self.0 && b < self.0);
        ((a as u16 * b as u16) % self.0 as u16) as u8
    }

    /// Reduces an accumulated sum of digit products modulo `p`.
    #[inline]
    pub fn reduce(self, acc: u32) -> u8 {
        (acc % self.0 as u32) as u8
    }
}

impl std::fmt::Display for PrimeBase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_small_primes() {
        for p in [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            assert_eq!(PrimeBase::new(p).unwrap().value(), p);
        }
    }

    #[test]
    fn rejects_composites_and_out_of_range() {
        for p in [0, 1, 4, 6, 9, 15, 21, 25, 27] {
            assert!(PrimeBase::new(p).is_err(), "base {p} should be rejected");
        }
        assert!(PrimeBase::new(37).is_err());
    }

    #[test]
    fn max_digits_respects_word_width() {
        assert_eq!(PrimeBase::two().max_digits(), 63);
        let p3 = PrimeBase::new(3).unwrap();
        // 3^39 < 2^63 < 3^40
        assert_eq!(p3.max_digits(), 39);
        assert!(p3.pow(39).is_ok());
        assert!(p3.pow(40).is_err());
    }

    #[test]
    fn pow_is_exact() {
        let p5 = PrimeBase::new(5).unwrap();
        assert_eq!(p5.pow(0).unwrap(), 1);
        assert_eq!(p5.pow(3).unwrap(), 125);
        assert_eq!(PrimeBase::two().pow(63).unwrap(), 1u64 << 63);
    }

    #[test]
    fn digit_arithmetic_wraps() {
        let p3 = PrimeBase::new(3).unwrap();
        assert_eq!(p3.add(2, 2), 1);
        assert_eq!(p3.mul(2, 2), 1);
        assert_eq!(p3.reduce(7), 1);
    }
}
