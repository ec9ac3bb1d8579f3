//! Recursive Richardson extrapolation over nested digital nets.
//!
//! A digit-truncated order-`alpha` rule at precision `n` has an error
//! expansion in powers of `p^{-n}`: the leading terms decay like `p^{-n}`,
//! `p^{-2n}`, ..., and the remainder like `p^{-alpha n}` (up to logarithmic
//! factors). One Richardson step with ratio `p^tau` removes the `p^{-tau n}`
//! term; chaining steps `tau = 1, ..., alpha-1` over rule sizes
//! `n = m, ..., m+alpha-1` removes every slow term and restores the
//! order-`alpha` decay of the underlying net without ever evaluating it at
//! full digit depth.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::PrimeBase;
use crate::integrand::Integrand;
use crate::quadrature::{integrate_net, Quadrature};
use crate::sequence::DigitalSequence;

/// Exact coefficients of the fully chained extrapolation: the order-`alpha`
/// value equals `sum_i w_i I_{m+i}` over the `alpha` underlying rule values.
///
/// `w_i = prod_{j=1}^{alpha-1-i} (-1)/(p^j - 1) * prod_{j=1}^{i} p^j/(p^j - 1)`,
/// and the weights sum to exactly 1 (the combination reproduces constants).
pub fn extrapolation_weights(alpha: u32, base: PrimeBase) -> Result<Vec<BigRational>> {
    if alpha == 0 {
        return Err(Error::range("extrapolation order must be at least 1"));
    }
    let p = BigInt::from(base.value());
    let pow = |j: u32| -> BigInt { num_traits::pow::pow(p.clone(), j as usize) };
    let mut weights = Vec::with_capacity(alpha as usize);
    for i in 0..alpha {
        let mut w = BigRational::one();
        for j in 1..=(alpha - 1 - i) {
            w *= BigRational::new(-BigInt::one(), pow(j) - BigInt::one());
        }
        for j in 1..=i {
            w *= BigRational::new(pow(j), pow(j) - BigInt::one());
        }
        weights.push(w);
    }
    Ok(weights)
}

/// The weights as floats, for bound evaluation and cross-checks.
pub fn extrapolation_weights_f64(alpha: u32, base: PrimeBase) -> Result<Vec<f64>> {
    Ok(extrapolation_weights(alpha, base)?
        .iter()
        .map(|w| w.to_f64().expect("extrapolation weight fits in f64"))
        .collect())
}

/// One Richardson step with ratio `p^tau`:
/// `out[i] = (p^tau * prev[i+1] - prev[i]) / (p^tau - 1)`.
pub fn richardson_level(tau: u32, prev: &[f64], base: PrimeBase) -> Vec<f64> {
    assert!(tau >= 1, "Richardson step index starts at 1");
    let pt = (base.value() as f64).powi(tau as i32);
    prev.windows(2).map(|w| (pt * w[1] - w[0]) / (pt - 1.0)).collect()
}

/// Triangular table of extrapolated values. Level 1 holds the raw rule
/// values for consecutive sizes `n = n_min, n_min+1, ...`; level `tau+1` is
/// one Richardson step (ratio `p^tau`) applied to level `tau`, so each level
/// is one entry shorter. The level-`tau` entry at offset `i` estimates the
/// integral with the first `tau-1` error terms of rule size `n_min + i`
/// removed.
#[derive(Clone, Debug)]
pub struct ExtrapolationTableau {
    base: PrimeBase,
    levels: Vec<Vec<f64>>,
}

impl ExtrapolationTableau {
    /// Builds levels `1..=max_level` (bounded by the level-1 length).
    pub fn from_level1(base: PrimeBase, level1: Vec<f64>, max_level: u32) -> Self {
        assert!(!level1.is_empty(), "tableau needs at least one rule value");
        let top = (max_level.max(1) as usize).min(level1.len());
        let mut levels = vec![level1];
        for tau in 1..top as u32 {
            let next = richardson_level(tau, &levels[tau as usize - 1], base);
            levels.push(next);
        }
        ExtrapolationTableau { base, levels }
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn max_level(&self) -> u32 {
        self.levels.len() as u32
    }

    /// Values at a given level (1-based); `None` beyond the computed top.
    pub fn level(&self, tau: u32) -> Option<&[f64]> {
        if tau == 0 {
            return None;
        }
        self.levels.get(tau as usize - 1).map(Vec::as_slice)
    }

    /// Single entry lookup: level `tau`, offset `i` within that level.
    pub fn value(&self, tau: u32, i: usize) -> Option<f64> {
        self.level(tau).and_then(|l| l.get(i)).copied()
    }
}

fn check_order(seq: &DigitalSequence, alpha: u32) -> Result<()> {
    if alpha == 0 {
        return Err(Error::range("extrapolation order must be at least 1"));
    }
    if seq.order() != alpha {
        return Err(Error::config(format!(
            "extrapolation order {alpha} requires an order-{alpha} sequence, got order {}",
            seq.order()
        )));
    }
    Ok(())
}

/// Order-`alpha` estimate from square rules: integrates the `p^{m+i}`-point
/// nets with square generating matrices for `i = 0, ..., alpha-1` and chains
/// the Richardson steps. Total cost `sum_i p^{m+i}` evaluations.
pub fn extrapolated_square(
    f: &dyn Integrand,
    seq: &DigitalSequence,
    alpha: u32,
    m: u32,
) -> Result<Quadrature> {
    check_order(seq, alpha)?;
    let mut level1 = Vec::with_capacity(alpha as usize);
    let mut evaluations = 0u64;
    for i in 0..alpha {
        let n = m + i;
        let mats = seq.matrices(n, n)?;
        let q = integrate_net(f, &mats)?;
        level1.push(q.estimate);
        evaluations += q.evaluations;
    }
    let tableau = ExtrapolationTableau::from_level1(seq.base(), level1, alpha);
    let estimate = tableau.value(alpha, 0).expect("tableau reaches requested level");
    Ok(Quadrature { estimate, evaluations })
}

/// Order-`alpha` estimate at fixed point count `p^m`: integrates the same
/// `p^m` points rendered at digit precisions `m, ..., m+alpha-1` (rectangular
/// generating matrices with `m+i` rows and `m` columns) and chains the same
/// Richardson steps. Total cost `alpha * p^m` evaluations.
pub fn extrapolated_fixed_m(
    f: &dyn Integrand,
    seq: &DigitalSequence,
    alpha: u32,
    m: u32,
) -> Result<Quadrature> {
    check_order(seq, alpha)?;
    let mut level1 = Vec::with_capacity(alpha as usize);
    let mut evaluations = 0u64;
    for i in 0..alpha {
        let mats = seq.matrices(m + i, m)?;
        let q = integrate_net(f, &mats)?;
        level1.push(q.estimate);
        evaluations += q.evaluations;
    }
    let tableau = ExtrapolationTableau::from_level1(seq.base(), level1, alpha);
    let estimate = tableau.value(alpha, 0).expect("tableau reaches requested level");
    Ok(Quadrature { estimate, evaluations })
}

/// Exactness check used in tests and the verification CLI: the weights of
/// any valid order sum to 1 with no rounding at all.
pub fn weights_sum(alpha: u32, base: PrimeBase) -> Result<BigRational> {
    let mut sum = BigRational::zero();
    for w in extrapolation_weights(alpha, base)? {
        sum += w;
    }
    Ok(sum)
}

/// Sum of absolute weights, a factor in the worst-case error bounds.
pub fn weights_abs_sum_f64(alpha: u32, base: PrimeBase) -> Result<f64> {
    Ok(extrapolation_weights(alpha, base)?
        .iter()
        .map(|w| w.abs().to_f64().expect("weight fits in f64"))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrand::FnIntegrand;
    use crate::sobol::DirectionNumberTable;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn binary_weights_match_hand_computation() {
        let p2 = PrimeBase::two();
        assert_eq!(extrapolation_weights(1, p2).unwrap(), vec![ratio(1, 1)]);
        assert_eq!(extrapolation_weights(2, p2).unwrap(), vec![ratio(-1, 1), ratio(2, 1)]);
        assert_eq!(
            extrapolation_weights(3, p2).unwrap(),
            vec![ratio(1, 3), ratio(-2, 1), ratio(8, 3)]
        );
    }

    #[test]
    fn weights_sum_to_one_exactly() {
        for p in [2u32, 3, 5] {
            let base = PrimeBase::new(p).unwrap();
            for alpha in 1..=8 {
                assert!(weights_sum(alpha, base).unwrap().is_one(), "alpha={alpha} p={p}");
            }
        }
    }

    #[test]
    fn single_step_removes_geometric_error_term() {
        // I_n = 1/2 + 1/4 * 2^-n: one ratio-2 step recovers 1/2 exactly
        // because every constant involved is a power of two.
        let p2 = PrimeBase::two();
        let level1: Vec<f64> = (3..7).map(|n| 0.5 + 0.25 * (2.0f64).powi(-n)).collect();
        let level2 = richardson_level(1, &level1, p2);
        assert_eq!(level2, vec![0.5, 0.5, 0.5]);
    }

    #[test]
    fn tableau_matches_weighted_combination() {
        let p2 = PrimeBase::two();
        let level1 = vec![0.731, 0.705, 0.6911, 0.68831];
        let tableau = ExtrapolationTableau::from_level1(p2, level1.clone(), 4);
        for alpha in 1..=4u32 {
            let weights = extrapolation_weights_f64(alpha, p2).unwrap();
            let combined: f64 =
                weights.iter().zip(&level1).map(|(w, v)| w * v).sum();
            let tab = tableau.value(alpha, 0).unwrap();
            assert!(
                (tab - combined).abs() <= 1e-14 * combined.abs().max(1.0),
                "alpha={alpha}: {tab} vs {combined}"
            );
        }
    }

    #[test]
    fn order_one_is_the_plain_rule() {
        let table = DirectionNumberTable::bundled();
        let seq = DigitalSequence::sobol(table, 2).unwrap();
        let f = FnIntegrand::new(2, |x: &[f64]| (1.0 + x[0]) * x[1] * x[1]);
        let direct = integrate_net(&f, &seq.matrices(6, 6).unwrap()).unwrap();
        let wrapped = extrapolated_square(&f, &seq, 1, 6).unwrap();
        assert_eq!(direct.estimate.to_bits(), wrapped.estimate.to_bits());
        assert_eq!(wrapped.evaluations, 64);
    }

    #[test]
    fn square_and_fixed_m_costs() {
        let table = DirectionNumberTable::bundled();
        let seq = DigitalSequence::interlaced_sobol(table, 2, 2).unwrap();
        let f = FnIntegrand::new(2, |x: &[f64]| x[0] * x[1]);
        let sq = extrapolated_square(&f, &seq, 2, 5).unwrap();
        assert_eq!(sq.evaluations, 32 + 64);
        let fm = extrapolated_fixed_m(&f, &seq, 2, 5).unwrap();
        assert_eq!(fm.evaluations, 2 * 32);
    }

    #[test]
    fn order_mismatch_rejected() {
        let table = DirectionNumberTable::bundled();
        let seq = DigitalSequence::sobol(table, 2).unwrap();
        let f = FnIntegrand::new(2, |x: &[f64]| x[0]);
        assert!(extrapolated_square(&f, &seq, 2, 4).is_err());
    }
}
