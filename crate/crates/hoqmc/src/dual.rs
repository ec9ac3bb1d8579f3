//! Dual nets and the order-`alpha` digit weight.
//!
//! A frequency vector `k` belongs to the dual of the net generated by
//! `C_1, ..., C_s` (shape `n x m`) exactly when
//! `C_1^T nu(k_1) + ... + C_s^T nu(k_s) = 0` in `F_p^m`, where `nu`
//! takes the first `n` base-`p` digits. The weight `mu_alpha(k)` sums the
//! `alpha` highest nonzero digit positions of `k`; the minimum weight over
//! nonzero dual vectors measures equidistribution: the net is an
//! order-`alpha` net with quality `t` exactly when that minimum exceeds
//! `alpha * m - t`.

use crate::digits::nu;
use crate::error::{Error, Result};
use crate::field::PrimeBase;
use crate::matrix::GeneratingMatrix;
use crate::net::check_family;
use crate::MAX_ENUMERATION;

/// Reverses the first `n` bits of `k` (bit `i` moves to bit `n-1-i`),
/// aligning digit `kappa_i` of `k` with the packed matrix row `i+1`.
#[inline]
pub(crate) fn reverse_low_bits(k: u64, n: u32) -> u64 {
    debug_assert!(n >= 1 && n <= 64);
    let masked = if n == 64 { k } else { k & ((1u64 << n) - 1) };
    masked.reverse_bits() >> (64 - n)
}

/// Whether `k` lies in the dual of the net generated by `matrices`.
/// Components of `k` may exceed `p^n`; digits beyond position `n` are
/// discarded, consistent with the characters of precision-`n` points.
pub fn is_dual(matrices: &[GeneratingMatrix], k: &[u64]) -> Result<bool> {
    let (base, rows, cols) = check_family(matrices)?;
    if k.len() != matrices.len() {
        return Err(Error::config(format!(
            "{} frequency components for {} coordinates",
            k.len(),
            matrices.len()
        )));
    }
    if base.is_binary() {
        let masks: Vec<u64> = k.iter().map(|&kj| reverse_low_bits(kj, rows)).collect();
        for l in 0..cols as usize {
            let mut parity = 0u32;
            for (mat, &mask) in matrices.iter().zip(&masks) {
                parity ^= (mat.packed_columns().unwrap()[l] & mask).count_ones();
            }
            if parity & 1 == 1 {
                return Ok(false);
            }
        }
    } else {
        let digit_vecs: Vec<_> = k.iter().map(|&kj| nu(kj, rows, base)).collect();
        for l in 0..cols {
            let mut acc = 0u32;
            for (mat, digits) in matrices.iter().zip(&digit_vecs) {
                let col = mat.dense_column(l).unwrap();
                for (r, &e) in col.iter().enumerate() {
                    acc += digits.digit(r) as u32 * e as u32;
                }
            }
            if base.reduce(acc) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All dual vectors with every component below `bound`, in lexicographic
/// order. Guarded by `bound^s <= 2^26` candidates.
pub fn enumerate_dual(matrices: &[GeneratingMatrix], bound: u64) -> Result<Vec<Vec<u64>>> {
    let (_, _, _) = check_family(matrices)?;
    let s = matrices.len() as u32;
    if bound == 0 {
        return Err(Error::range("enumeration bound must be positive"));
    }
    let candidates = bound
        .checked_pow(s)
        .filter(|&c| c <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::capacity(format!(
                "{bound}^{s} candidate vectors exceed the {MAX_ENUMERATION} enumeration cap"
            ))
        })?;
    let mut out = Vec::new();
    let mut k = vec![0u64; s as usize];
    for _ in 0..candidates {
        if is_dual(matrices, &k)? {
            out.push(k.clone());
        }
        // Lexicographic successor: increment the last component first.
        for j in (0..k.len()).rev() {
            k[j] += 1;
            if k[j] < bound {
                break;
            }
            k[j] = 0;
        }
    }
    Ok(out)
}

/// The order-`alpha` digit weight: for `k` with nonzero digits at positions
/// `c_1 > c_2 > ... > c_v` (1-based), the sum of the `min(alpha, v)`
/// highest positions. `mu_alpha(0) = 0`.
pub fn mu_alpha(k: u64, alpha: u32, base: PrimeBase) -> u64 {
    assert!(alpha >= 1, "weight order must be positive");
    let p = base.value() as u64;
    let mut positions = Vec::new();
    let mut v = k;
    let mut pos = 1u64;
    while v > 0 {
        if v % p != 0 {
            positions.push(pos);
        }
        v /= p;
        pos += 1;
    }
    positions.iter().rev().take(alpha as usize).sum()
}

/// Componentwise sum of [`mu_alpha`] over a frequency vector.
pub fn mu_alpha_vec(k: &[u64], alpha: u32, base: PrimeBase) -> u64 {
    k.iter().map(|&kj| mu_alpha(kj, alpha, base)).sum()
}

/// Minimum order-`alpha` weight over nonzero dual vectors, the net's
/// equidistribution strength.
///
/// Only vectors with components below `p^n` are enumerated; every dual
/// vector outside that box has weight at least `n + 1` (the weight of
/// `(p^n, 0, ..., 0)`, which is always dual), so the reported strength is
/// the enumerated minimum capped at `n + 1`.
pub fn net_strength(matrices: &[GeneratingMatrix], alpha: u32) -> Result<u64> {
    let (base, rows, _) = check_family(matrices)?;
    let per_coord = base.pow(rows)?;
    let s = matrices.len() as u32;
    let cap = rows as u64 + 1;
    let candidates = per_coord
        .checked_pow(s)
        .filter(|&c| c <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::capacity(format!(
                "{per_coord}^{s} candidate vectors exceed the {MAX_ENUMERATION} enumeration cap"
            ))
        })?;
    let mut min_weight = u64::MAX;
    let mut k = vec![0u64; s as usize];
    for _ in 1..candidates {
        for j in (0..k.len()).rev() {
            k[j] += 1;
            if k[j] < per_coord {
                break;
            }
            k[j] = 0;
        }
        if is_dual(matrices, &k)? {
            min_weight = min_weight.min(mu_alpha_vec(&k, alpha, base));
        }
    }
    Ok(min_weight.min(cap))
}

/// Smallest quality parameter consistent with a strength measurement on an
/// `m`-column net: `alpha * m - strength + 1`, clamped at zero.
pub fn inferred_t(alpha: u32, cols: u32, strength: u64) -> u64 {
    (alpha as u64 * cols as u64 + 1).saturating_sub(strength)
}
