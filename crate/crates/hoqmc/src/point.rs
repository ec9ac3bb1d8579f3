//! Exact fixed-point coordinates and materialized point sets.
//!
//! A coordinate with `n` base-`p` digits is kept as the integer numerator
//! `v` of `v / p^n`. All structural operations (truncation, digitwise
//! addition, character exponents) run on the numerator, so they are exact;
//! rounding can only enter when a coordinate is converted to `f64` for an
//! integrand evaluation.

use crate::error::{Error, Result};
use crate::field::PrimeBase;

/// Hard cap on `points * dims` entries a materialized [`PointSet`] may hold.
/// Larger nets must be streamed.
pub const MAX_POINT_SET_ENTRIES: u64 = 1 << 26;

/// One coordinate `v / p^n` with exactly `n` digits of precision.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FixedPointCoord {
    numerator: u64,
    precision: u32,
    base: PrimeBase,
}

impl FixedPointCoord {
    pub fn new(numerator: u64, precision: u32, base: PrimeBase) -> Result<Self> {
        let scale = base.pow(precision)?;
        if numerator >= scale {
            return Err(Error::range(format!(
                "numerator {numerator} not below {base}^{precision}"
            )));
        }
        Ok(FixedPointCoord { numerator, precision, base })
    }

    pub fn zero(precision: u32, base: PrimeBase) -> Result<Self> {
        Self::new(0, precision, base)
    }

    pub fn numerator(self) -> u64 {
        self.numerator
    }

    pub fn precision(self) -> u32 {
        self.precision
    }

    pub fn base(self) -> PrimeBase {
        self.base
    }

    /// Digit `i` counted from the most significant position, 1-based: the
    /// coefficient of `p^-i` in the expansion of the coordinate.
    pub fn digit(self, i: u32) -> u8 {
        assert!(i >= 1 && i <= self.precision, "digit index out of range");
        let p = self.base.value() as u64;
        let shift = (self.base.value() as u64).pow(self.precision - i);
        ((self.numerator / shift) % p) as u8
    }

    /// Keeps the first `m` digits, discarding the rest.
    pub fn truncate(self, m: u32) -> Result<Self> {
        if m > self.precision {
            return Err(Error::range(format!(
                "cannot truncate {n}-digit coordinate to {m} digits",
                n = self.precision
            )));
        }
        let divisor = (self.base.value() as u64).pow(self.precision - m);
        Ok(FixedPointCoord {
            numerator: self.numerator / divisor,
            precision: m,
            base: self.base,
        })
    }

    /// Nearest `f64` to `v / p^n`. Exact whenever `v` fits the 53-bit
    /// mantissa and `p = 2`; otherwise correct to about one unit in the last
    /// place.
    pub fn to_real(self) -> f64 {
        numerator_to_real(self.numerator, self.precision, self.base)
    }

    /// Digitwise sum modulo `p` with a coordinate of the same shape.
    pub fn digitwise_add(self, other: Self) -> Result<Self> {
        if self.base != other.base || self.precision != other.precision {
            return Err(Error::config(
                "digitwise addition requires matching base and precision",
            ));
        }
        if self.base.is_binary() {
            return Ok(FixedPointCoord { numerator: self.numerator ^ other.numerator, ..self });
        }
        let p = self.base.value() as u64;
        let mut a = self.numerator;
        let mut b = other.numerator;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.precision {
            out += ((a + b) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        Ok(FixedPointCoord { numerator: out, ..self })
    }
}

impl std::fmt::Display for FixedPointCoord {
    /// Exact rational form `v/p^n`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let scale = (self.base.value() as u64).pow(self.precision);
        write!(f, "{}/{}", self.numerator, scale)
    }
}

#[inline]
pub(crate) fn numerator_to_real(numerator: u64, precision: u32, base: PrimeBase) -> f64 {
    if base.is_binary() {
        // Scaling by a power of two is exact.
        numerator as f64 * f64::powi(0.5, precision as i32)
    } else {
        numerator as f64 / (base.value() as u64).pow(precision) as f64
    }
}

/// A materialized digital net: `len` points of `dims` coordinates at a
/// shared precision, stored as numerators in point order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    base: PrimeBase,
    dims: u32,
    precision: u32,
    numerators: Vec<u64>,
}

impl PointSet {
    pub fn from_numerators(
        base: PrimeBase,
        dims: u32,
        precision: u32,
        numerators: Vec<u64>,
    ) -> Result<Self> {
        if dims == 0 {
            return Err(Error::range("point set needs at least one dimension"));
        }
        if numerators.len() as u64 > MAX_POINT_SET_ENTRIES {
            return Err(Error::capacity(format!(
                "point set with {} entries exceeds the {MAX_POINT_SET_ENTRIES} entry cap",
                numerators.len()
            )));
        }
        if numerators.len() % dims as usize != 0 {
            return Err(Error::range(format!(
                "{} numerators do not fill {dims}-dimensional points",
                numerators.len()
            )));
        }
        let scale = base.pow(precision)?;
        if numerators.iter().any(|&v| v >= scale) {
            return Err(Error::range(format!("numerator not below {base}^{precision}")));
        }
        Ok(PointSet { base, dims, precision, numerators })
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn dims(&self) -> u32 {
        self.dims
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.numerators.len() / self.dims as usize
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// Numerators of point `h` in coordinate order.
    pub fn point(&self, h: usize) -> &[u64] {
        let s = self.dims as usize;
        &self.numerators[h * s..(h + 1) * s]
    }

    pub fn coord(&self, h: usize, j: u32) -> FixedPointCoord {
        assert!(j < self.dims, "coordinate index out of bounds");
        FixedPointCoord {
            numerator: self.point(h)[j as usize],
            precision: self.precision,
            base: self.base,
        }
    }

    /// Iterates points as numerator slices in index order.
    pub fn iter_points(&self) -> impl Iterator<Item = &[u64]> {
        self.numerators.chunks_exact(self.dims as usize)
    }

    /// Truncates every coordinate to its first `m` digits.
    pub fn truncate(&self, m: u32) -> Result<PointSet> {
        if m > self.precision {
            return Err(Error::range(format!(
                "cannot truncate {n}-digit points to {m} digits",
                n = self.precision
            )));
        }
        let divisor = (self.base.value() as u64).pow(self.precision - m);
        Ok(PointSet {
            base: self.base,
            dims: self.dims,
            precision: m,
            numerators: self.numerators.iter().map(|&v| v / divisor).collect(),
        })
    }

    /// Writes point `h` into `out` as `f64` coordinates.
    pub fn write_real(&self, h: usize, out: &mut [f64]) {
        assert_eq!(out.len(), self.dims as usize);
        for (x, &v) in out.iter_mut().zip(self.point(h)) {
            *x = numerator_to_real(v, self.precision, self.base);
        }
    }
}
