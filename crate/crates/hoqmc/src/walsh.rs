//! Base-`p` Walsh characters and their means over grids and nets.
//!
//! The `k`-th Walsh function pairs the digits of `k = kappa_0 + kappa_1 p
//! + ...` with the fractional digits `xi_1, xi_2, ...` of its argument:
//! `wal_k(x) = omega^(kappa_0 xi_1 + kappa_1 xi_2 + ...)` for the primitive
//! root of unity `omega = exp(2 pi i / p)`. Values are carried around as
//! exponents modulo `p`, so products, conjugates, and means of roots of
//! unity reduce to integer bookkeeping; conversion to a complex number
//! happens only at the edge of the API.

use num_complex::Complex64;

use crate::dual::reverse_low_bits;
use crate::error::{Error, Result};
use crate::field::PrimeBase;
use crate::integrand::Integrand;
use crate::matrix::GeneratingMatrix;
use crate::net::{check_family, NetCursor};
use crate::point::FixedPointCoord;
use crate::summation::Accumulator;
use crate::MAX_ENUMERATION;

/// A `p`-th root of unity, stored as its exponent.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WalshValue {
    exponent: u8,
    base: PrimeBase,
}

impl WalshValue {
    pub fn new(exponent: u8, base: PrimeBase) -> Self {
        WalshValue { exponent: base.reduce(exponent as u32), base }
    }

    pub fn exponent(self) -> u8 {
        self.exponent
    }

    pub fn base(self) -> PrimeBase {
        self.base
    }

    /// Product of roots of unity: exponents add modulo `p`.
    pub fn mul(self, other: WalshValue) -> WalshValue {
        debug_assert_eq!(self.base, other.base);
        WalshValue { exponent: self.base.add(self.exponent, other.exponent), base: self.base }
    }

    /// Complex conjugate: the exponent negates modulo `p`.
    pub fn conj(self) -> WalshValue {
        let p = self.base.value() as u8;
        let exponent = if self.exponent == 0 { 0 } else { p - self.exponent };
        WalshValue { exponent, base: self.base }
    }

    pub fn to_complex(self) -> Complex64 {
        root_of_unity(self.exponent, self.base)
    }
}

fn root_of_unity(exponent: u8, base: PrimeBase) -> Complex64 {
    match (base.value(), exponent) {
        (_, 0) => Complex64::new(1.0, 0.0),
        (2, 1) => Complex64::new(-1.0, 0.0),
        (p, e) => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * e as f64 / p as f64),
    }
}

/// Exponent of `wal_k` at the coordinate with the given numerator and
/// precision. Digits of `k` beyond the precision meet only zero digits of
/// the argument and contribute nothing.
#[inline]
pub(crate) fn coordinate_exponent(
    k: u64,
    numerator: u64,
    precision: u32,
    base: PrimeBase,
) -> u8 {
    if precision == 0 {
        // A precision-0 coordinate is exactly 0, where every character is 1.
        return 0;
    }
    if base.is_binary() {
        ((numerator & reverse_low_bits(k, precision)).count_ones() & 1) as u8
    } else {
        let p = base.value() as u64;
        let mut acc = 0u32;
        let mut kk = k;
        let mut scale = p.pow(precision - 1);
        for _ in 0..precision {
            if kk == 0 {
                break;
            }
            acc += (kk % p) as u32 * ((numerator / scale) % p) as u32;
            kk /= p;
            scale /= p;
        }
        base.reduce(acc)
    }
}

/// `wal_k` evaluated at a single coordinate.
pub fn walsh(k: u64, x: FixedPointCoord) -> WalshValue {
    WalshValue {
        exponent: coordinate_exponent(k, x.numerator(), x.precision(), x.base()),
        base: x.base(),
    }
}

/// The multivariate character `wal_k(x) = prod_j wal_{k_j}(x_j)`.
pub fn walsh_vec(k: &[u64], x: &[FixedPointCoord]) -> Result<WalshValue> {
    if k.len() != x.len() || x.is_empty() {
        return Err(Error::config(format!(
            "{} frequency components for {} coordinates",
            k.len(),
            x.len()
        )));
    }
    let base = x[0].base();
    if x.iter().any(|c| c.base() != base) {
        return Err(Error::config("coordinates mix bases"));
    }
    let mut acc = 0u32;
    for (&kj, xj) in k.iter().zip(x) {
        acc += coordinate_exponent(kj, xj.numerator(), xj.precision(), base) as u32;
    }
    Ok(WalshValue { exponent: base.reduce(acc), base })
}

/// Counts of character exponents; the mean of the underlying roots of unity
/// is recovered exactly in the two structured cases (all mass at zero, or
/// uniform mass, which sums to zero by the minimal polynomial of `omega`).
#[derive(Clone, Debug)]
pub struct ExponentHistogram {
    base: PrimeBase,
    counts: Vec<u64>,
}

impl ExponentHistogram {
    pub fn new(base: PrimeBase) -> Self {
        ExponentHistogram { base, counts: vec![0; base.value() as usize] }
    }

    pub fn record(&mut self, exponent: u8) {
        self.counts[exponent as usize] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Mean of the recorded roots of unity.
    pub fn mean(&self) -> Complex64 {
        let total = self.total();
        assert!(total > 0, "empty histogram has no mean");
        if self.counts[1..].iter().all(|&c| c == 0) {
            return Complex64::new(self.counts[0] as f64 / total as f64, 0.0);
        }
        if self.counts.iter().all(|&c| c == self.counts[0]) {
            return Complex64::new(0.0, 0.0);
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (e, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                sum += root_of_unity(e as u8, self.base).scale(c as f64);
            }
        }
        sum.unscale(total as f64)
    }
}

/// Mean of `wal_k` over the one-dimensional regular grid `{h / p^n}`.
/// Equals 1 when `p^n` divides `k` and 0 otherwise; computed by
/// enumeration as an independent check of that identity.
pub fn walsh_grid_mean(k: u64, n: u32, base: PrimeBase) -> Result<Complex64> {
    let count = base.pow(n)?;
    if count > MAX_ENUMERATION {
        return Err(Error::capacity(format!(
            "{base}^{n} grid points exceed the {MAX_ENUMERATION} enumeration cap"
        )));
    }
    let mut hist = ExponentHistogram::new(base);
    for h in 0..count {
        hist.record(coordinate_exponent(k, h, n, base));
    }
    Ok(hist.mean())
}

/// Mean of `wal_k` over the digital net generated by `matrices`. Equals the
/// dual-membership indicator of `k`.
pub fn walsh_net_mean(matrices: &[GeneratingMatrix], k: &[u64]) -> Result<Complex64> {
    let (base, rows, cols) = check_family(matrices)?;
    if k.len() != matrices.len() {
        return Err(Error::config(format!(
            "{} frequency components for {} coordinates",
            k.len(),
            matrices.len()
        )));
    }
    let count = base.pow(cols)?;
    if count > MAX_ENUMERATION {
        return Err(Error::capacity(format!(
            "{base}^{cols} net points exceed the {MAX_ENUMERATION} enumeration cap"
        )));
    }
    let mut hist = ExponentHistogram::new(base);
    let mut cursor = NetCursor::new(matrices, 0)?;
    let mut numerators = vec![0u64; matrices.len()];
    for h in 0..count {
        cursor.write_numerators(&mut numerators);
        let mut acc = 0u32;
        for (&kj, &v) in k.iter().zip(&numerators) {
            acc += coordinate_exponent(kj, v, rows, base) as u32;
        }
        hist.record(base.reduce(acc));
        if h + 1 < count {
            cursor.advance();
        }
    }
    Ok(hist.mean())
}

/// Walsh coefficient of `f` approximated on the full regular grid with
/// `p^n` levels per axis: `p^{-ns} sum_x f(x) conj(wal_k(x))`. Converges to
/// the true coefficient as `n` grows. Guarded by `p^{ns} <= 2^26`
/// evaluations.
pub fn walsh_coefficient_oracle(
    f: &dyn Integrand,
    k: &[u64],
    n: u32,
    base: PrimeBase,
) -> Result<Complex64> {
    let dims = k.len() as u32;
    if dims == 0 || dims != f.dims() {
        return Err(Error::config(format!(
            "{dims} frequency components for a {}-dimensional integrand",
            f.dims()
        )));
    }
    let per_axis = base.pow(n)?;
    let total = per_axis
        .checked_pow(dims)
        .filter(|&t| t <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::capacity(format!(
                "{base}^{} grid points exceed the {MAX_ENUMERATION} enumeration cap",
                n as u64 * dims as u64
            ))
        })?;
    // Partial sums of f per character exponent; the complex combination
    // happens once at the end.
    let mut sums = vec![Accumulator::default(); base.value() as usize];
    let mut grid = vec![0u64; dims as usize];
    let mut x = vec![0.0f64; dims as usize];
    let scale = per_axis as f64;
    for step in 0..total {
        for (xj, &gj) in x.iter_mut().zip(grid.iter()) {
            *xj = gj as f64 / scale;
        }
        let mut acc = 0u32;
        for (&kj, &gj) in k.iter().zip(grid.iter()) {
            acc += coordinate_exponent(kj, gj, n, base) as u32;
        }
        sums[base.reduce(acc) as usize].add(f.eval(&x));
        if step + 1 < total {
            for g in grid.iter_mut() {
                *g += 1;
                if *g < per_axis {
                    break;
                }
                *g = 0;
            }
        }
    }
    let mut out = Complex64::new(0.0, 0.0);
    for (e, sum) in sums.iter().enumerate() {
        let conj_root = root_of_unity(e as u8, base).conj();
        out += conj_root.scale(sum.value());
    }
    Ok(out.unscale(total as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrand::FnIntegrand;

    #[test]
    fn binary_walsh_examples() {
        let quarter = FixedPointCoord::new(1, 2, PrimeBase::two()).unwrap();
        assert_eq!(walsh(2, quarter).exponent(), 1);
        assert_eq!(walsh(2, quarter).to_complex(), Complex64::new(-1.0, 0.0));
        let half = FixedPointCoord::new(1, 1, PrimeBase::two()).unwrap();
        assert_eq!(walsh(1, half).exponent(), 1);
        assert_eq!(walsh(0, half).exponent(), 0);
    }

    #[test]
    fn ternary_walsh_pairs_digits() {
        let p3 = PrimeBase::new(3).unwrap();
        // x = 0.21 base 3, k = 5 = 2 + 1*3: exponent = 2*2 + 1*1 = 5 = 2 mod 3.
        let x = FixedPointCoord::new(7, 2, p3).unwrap();
        assert_eq!(walsh(5, x).exponent(), 2);
    }

    #[test]
    fn characters_multiply_under_digitwise_addition() {
        let p2 = PrimeBase::two();
        for k in 0..16u64 {
            for a in 0..8u64 {
                for b in 0..8u64 {
                    let xa = FixedPointCoord::new(a, 3, p2).unwrap();
                    let xb = FixedPointCoord::new(b, 3, p2).unwrap();
                    let sum = xa.digitwise_add(xb).unwrap();
                    assert_eq!(
                        walsh(k, xa).mul(walsh(k, xb)),
                        walsh(k, sum),
                        "k={k} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn grid_mean_is_divisibility_indicator() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(walsh_grid_mean(2, 1, PrimeBase::two()).unwrap(), one);
        assert_eq!(walsh_grid_mean(1, 1, PrimeBase::two()).unwrap(), zero);
        let p3 = PrimeBase::new(3).unwrap();
        assert_eq!(walsh_grid_mean(9, 2, p3).unwrap(), one);
        assert_eq!(walsh_grid_mean(10, 2, p3).unwrap(), zero);
    }

    #[test]
    fn net_mean_matches_dual_membership() {
        let mats = vec![GeneratingMatrix::identity(PrimeBase::two(), 2).unwrap()];
        assert_eq!(
            walsh_net_mean(&mats, &[4]).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert_eq!(
            walsh_net_mean(&mats, &[3]).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn zero_coefficient_is_grid_mean() {
        let f = FnIntegrand::new(1, |x: &[f64]| x[0]);
        let c = walsh_coefficient_oracle(&f, &[0], 3, PrimeBase::two()).unwrap();
        // Mean of h/8 over h < 8 is 7/16.
        assert_eq!(c, Complex64::new(7.0 / 16.0, 0.0));
    }

    #[test]
    fn conjugate_negates_exponent() {
        let p3 = PrimeBase::new(3).unwrap();
        assert_eq!(WalshValue::new(2, p3).conj().exponent(), 1);
        assert_eq!(WalshValue::new(0, p3).conj().exponent(), 0);
    }
}
