//! Worst-case error bounds for the extrapolated quadrature rules.
//!
//! For integrands of smoothness `alpha` with dimension weights `gamma_u`,
//! both extrapolated algorithms admit a bound of the shape
//!
//! ```text
//! error <= sum_{nonempty u} gamma_u * K_{|u|} * (log_p N)^(alpha |u|) / N^alpha
//! ```
//!
//! where the per-cardinality constant `K_c` depends on the algorithm, the
//! smoothness, the base, and the quality parameter `t` of the underlying
//! sequence, and is assembled from a handful of closed-form constants:
//! a Walsh-coefficient decay constant `C_alpha`, the value `A_alpha` of the
//! sum `sum_l p^(-mu_alpha(l))`, and a Bernoulli-polynomial bound `D_alpha`.
//! `K_c` grows like `(2 alpha)^(alpha c) * ...` and overflows `f64` near
//! `c ~ 40`, so everything is evaluated in natural-log space; callers can
//! ask for `ln(bound)` when the bound itself is not representable.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::extrapolate::extrapolation_weights;
use crate::field::PrimeBase;

/// Maximum dimension for explicitly enumerated per-subset weights.
pub const MAX_SUBSET_DIMS: u32 = 20;

fn big_pow(base: &BigInt, exp: u32) -> BigInt {
    num_traits::pow::pow(base.clone(), exp as usize)
}

/// First `count` Bernoulli numbers `B_0, ..., B_{count-1}` (convention
/// `B_1 = -1/2`), from the recurrence
/// `B_m = -1/(m+1) * sum_{j<m} binom(m+1, j) B_j`.
pub fn bernoulli_numbers(count: usize) -> Vec<BigRational> {
    let mut numbers: Vec<BigRational> = Vec::with_capacity(count);
    for m in 0..count {
        if m == 0 {
            numbers.push(BigRational::one());
            continue;
        }
        let mut sum = BigRational::zero();
        let mut binom = BigInt::one(); // binom(m+1, 0)
        for (j, b) in numbers.iter().enumerate() {
            sum += BigRational::from_integer(binom.clone()) * b;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        numbers.push(-sum / BigRational::from_integer(BigInt::from(m + 1)));
    }
    numbers
}

/// `b_tau = B_tau(0) / tau!`, the constant term of the scaled Bernoulli
/// polynomial of degree `tau`.
pub fn scaled_bernoulli(tau: u32) -> BigRational {
    let numbers = bernoulli_numbers(tau as usize + 1);
    let mut factorial = BigInt::one();
    for i in 2..=tau {
        factorial *= BigInt::from(i);
    }
    numbers[tau as usize].clone() / BigRational::from_integer(factorial)
}

/// Coefficients of `b_alpha(x) = B_alpha(x) / alpha!` in ascending powers:
/// the coefficient of `x^d` is `B_{alpha-d} / ((alpha-d)! d!)`.
fn scaled_bernoulli_poly(alpha: u32) -> Vec<f64> {
    let numbers = bernoulli_numbers(alpha as usize + 1);
    let mut factorials = vec![BigInt::one(); alpha as usize + 1];
    for i in 1..=alpha as usize {
        factorials[i] = &factorials[i - 1] * BigInt::from(i);
    }
    (0..=alpha as usize)
        .map(|d| {
            let k = alpha as usize - d;
            let denom = &factorials[k] * &factorials[d];
            (numbers[k].clone() / BigRational::from_integer(denom))
                .to_f64()
                .expect("scaled Bernoulli coefficient fits in f64")
        })
        .collect()
}

fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `sup_{x in [0,1)} |b_alpha(x)|` for the one-periodic scaled Bernoulli
/// polynomial, by dense sampling (the left endpoint included) followed by a
/// local ternary-search refinement around the best sample.
pub fn periodic_bernoulli_sup(alpha: u32, samples: u32) -> f64 {
    assert!(alpha >= 1 && samples >= 2);
    let coeffs = scaled_bernoulli_poly(alpha);
    let g = |x: f64| eval_poly(&coeffs, x).abs();
    let step = 1.0 / samples as f64;
    let mut best_x = 0.0;
    let mut best = g(0.0);
    for i in 1..samples {
        let x = i as f64 * step;
        let v = g(x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let mut lo = (best_x - step).max(0.0);
    let mut hi = (best_x + step).min(1.0 - f64::EPSILON);
    for _ in 0..200 {
        let third = (hi - lo) / 3.0;
        let m1 = lo + third;
        let m2 = hi - third;
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(g(0.5 * (lo + hi)))
}

/// Walsh-coefficient decay constant:
/// `C_alpha = (1 + 1/p + 1/(p(p+1)))^(alpha-2) * (3 + 2/p + (2p+1)/(p-1))
///            * max(2 / (2 sin(pi/p))^alpha, max_{1<=z<alpha} (2 sin(pi/p))^(-z))`.
pub fn walsh_decay_constant(alpha: u32, base: PrimeBase) -> Result<f64> {
    if alpha < 2 {
        return Err(Error::range("decay constant is defined for smoothness >= 2"));
    }
    let p = base.value() as f64;
    let first = (1.0 + 1.0 / p + 1.0 / (p * (p + 1.0))).powi(alpha as i32 - 2);
    let second = 3.0 + 2.0 / p + (2.0 * p + 1.0) / (p - 1.0);
    let sine = 2.0 * (PI / p).sin();
    let mut tail = 2.0 / sine.powi(alpha as i32);
    for z in 1..alpha {
        tail = tail.max(sine.powi(-(z as i32)));
    }
    Ok(first * second * tail)
}

/// Exact value of `sum_{l >= 0} p^(-mu_alpha(l))`:
/// `A_alpha = 1 + sum_{w=1}^{alpha-1} prod_{i=1}^{w} (p-1)/(p^i - 1)
///            + (p^alpha - 1)/(p^alpha - p) * prod_{i=1}^{alpha} (p-1)/(p^i - 1)`.
/// The series diverges for `alpha = 1` (the closed form divides by zero).
pub fn weight_series_value(alpha: u32, base: PrimeBase) -> Result<BigRational> {
    if alpha < 2 {
        return Err(Error::range(
            "the digit-weight series converges only for smoothness >= 2",
        ));
    }
    let p = BigInt::from(base.value());
    let p_minus_1 = &p - BigInt::one();
    let mut total = BigRational::one();
    let mut product = BigRational::one();
    for i in 1..alpha {
        product *= BigRational::new(p_minus_1.clone(), big_pow(&p, i) - BigInt::one());
        total += &product;
    }
    let p_alpha = big_pow(&p, alpha);
    product *= BigRational::new(p_minus_1, &p_alpha - BigInt::one());
    total += BigRational::new(&p_alpha - BigInt::one(), p_alpha - &p) * product;
    Ok(total)
}

/// The three closed-form constants entering every per-cardinality factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConstants {
    /// Walsh-coefficient decay constant `C_alpha`.
    pub c_alpha: f64,
    /// Digit-weight series value `A_alpha`.
    pub a_alpha: f64,
    /// Bernoulli bound `D_alpha = max{|b_1|, ..., |b_{alpha-1}|, sup |periodic b_alpha|}`.
    pub d_alpha: f64,
}

/// Sample count used for the Bernoulli sup in [`bound_constants`].
const SUP_SAMPLES: u32 = 100_000;

pub fn bound_constants(alpha: u32, base: PrimeBase) -> Result<BoundConstants> {
    let c_alpha = walsh_decay_constant(alpha, base)?;
    let a_alpha = weight_series_value(alpha, base)?
        .to_f64()
        .expect("weight series value fits in f64");
    let mut d_alpha = periodic_bernoulli_sup(alpha, SUP_SAMPLES);
    for tau in 1..alpha {
        d_alpha = d_alpha.max(
            scaled_bernoulli(tau).abs().to_f64().expect("Bernoulli value fits in f64"),
        );
    }
    Ok(BoundConstants { c_alpha, a_alpha, d_alpha })
}

/// Which algorithm's bound to evaluate; the two differ in the total point
/// count `N` and in the per-cardinality prefactor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundVariant {
    /// Square rules of growing size, `N = p^m + ... + p^(m+alpha-1)`.
    ExtrapolatedSquare,
    /// Fixed point count with growing precision, `N = alpha * p^m`.
    ExtrapolatedFixedM,
}

/// Dimension weights `gamma_u` over subsets of coordinates.
#[derive(Clone, Debug)]
pub enum Weights {
    /// `gamma_u = prod_{j in u} gamma_j`; any dimension count.
    Product(Vec<f64>),
    /// Explicit `gamma_u` indexed by subset bitmask (entry 0 ignored);
    /// length `2^s` with `s <= 20`.
    PerSubset(Vec<f64>),
}

impl Weights {
    pub fn dims(&self) -> Result<u32> {
        match self {
            Weights::Product(g) => {
                if g.is_empty() {
                    return Err(Error::config("product weights need at least one entry"));
                }
                Ok(g.len() as u32)
            }
            Weights::PerSubset(g) => {
                if g.len() < 2 || !g.len().is_power_of_two() {
                    return Err(Error::config(
                        "per-subset weights need length 2^s with s >= 1",
                    ));
                }
                let s = g.len().trailing_zeros();
                if s > MAX_SUBSET_DIMS {
                    return Err(Error::capacity(format!(
                        "per-subset weights support at most {MAX_SUBSET_DIMS} dimensions"
                    )));
                }
                Ok(s)
            }
        }
    }

    /// `ln(sum_{|u|=c} gamma_u)` for `c = 1, ..., s`. For product weights
    /// these are the elementary symmetric polynomials of the `gamma_j`,
    /// computed by the standard one-pass recurrence in log space.
    fn per_cardinality_ln(&self) -> Result<Vec<f64>> {
        let check = |g: &[f64]| -> Result<()> {
            if g.iter().any(|&v| !v.is_finite() || v < 0.0) {
                return Err(Error::config("weights must be finite and non-negative"));
            }
            Ok(())
        };
        match self {
            Weights::Product(g) => {
                check(g)?;
                let s = g.len();
                let mut e = vec![f64::NEG_INFINITY; s + 1];
                e[0] = 0.0;
                for &gamma in g {
                    if gamma == 0.0 {
                        continue;
                    }
                    let ln_g = gamma.ln();
                    for c in (1..=s).rev() {
                        e[c] = ln_add(e[c], ln_g + e[c - 1]);
                    }
                }
                Ok(e[1..].to_vec())
            }
            Weights::PerSubset(g) => {
                check(g)?;
                let s = self.dims()? as usize;
                let mut sums = vec![0.0f64; s + 1];
                for (mask, &gamma) in g.iter().enumerate().skip(1) {
                    sums[mask.count_ones() as usize] += gamma;
                }
                Ok(sums[1..].iter().map(|&v| v.ln()).collect())
            }
        }
    }
}

/// Everything the bound needs besides the point count.
#[derive(Clone, Debug)]
pub struct BoundParameters {
    pub alpha: u32,
    pub base: PrimeBase,
    /// Quality parameter of the underlying order-`alpha` net or sequence.
    pub t: u32,
    pub weights: Weights,
}

/// `ln(a + b)` given `ln a` and `ln b`, tolerating negative infinity.
fn ln_add(ln_a: f64, ln_b: f64) -> f64 {
    if ln_a == f64::NEG_INFINITY {
        return ln_b;
    }
    if ln_b == f64::NEG_INFINITY {
        return ln_a;
    }
    let (hi, lo) = if ln_a >= ln_b { (ln_a, ln_b) } else { (ln_b, ln_a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln` of the variant-specific weighted sum over extrapolation levels:
/// `sum_i |w_i| (alpha p^(alpha+1-i))^alpha` for square rules, plain
/// `sum_i |w_i|` for the fixed-count variant.
fn ln_level_sum(alpha: u32, base: PrimeBase, variant: BoundVariant) -> Result<f64> {
    let p = base.value() as f64;
    let weights = extrapolation_weights(alpha, base)?;
    let mut sum = 0.0f64;
    for (i, w) in weights.iter().enumerate() {
        let abs_w = w.abs().to_f64().expect("weight fits in f64");
        match variant {
            BoundVariant::ExtrapolatedSquare => {
                let factor = (alpha as f64) * p.powi(alpha as i32 + 1 - i as i32);
                sum += abs_w * factor.powi(alpha as i32);
            }
            BoundVariant::ExtrapolatedFixedM => sum += abs_w,
        }
    }
    Ok(sum.ln())
}

fn per_cardinality_ln_factor(
    consts: &BoundConstants,
    alpha: u32,
    base: PrimeBase,
    t: u32,
    cardinality: u32,
    ln_level_sum: f64,
    variant: BoundVariant,
) -> f64 {
    let p = base.value() as f64;
    let ln_p = p.ln();
    let c = cardinality as f64;
    let ac = (alpha * cardinality) as f64;
    // ln E_c = alpha*c*ln p + ln(1/p + (p/(p-1))^(alpha c))
    let ln_e = ac * ln_p + ln_add(-ln_p, ac * (p / (p - 1.0)).ln());
    let ln_net_part = t as f64 * ln_p
        + c * (consts.a_alpha.ln() + consts.c_alpha.ln())
        + ln_e;
    let ln_remainder_part = c * (((alpha + 1) as f64).ln() + consts.d_alpha.ln());
    let mid = ln_add(ln_net_part, ln_remainder_part);
    let lead = match variant {
        BoundVariant::ExtrapolatedSquare => ac * (2.0 * alpha as f64).ln(),
        // alpha / log_p(2) per interaction order.
        BoundVariant::ExtrapolatedFixedM => {
            ac * ((alpha as f64).ln() - (std::f64::consts::LN_2 / ln_p).ln())
        }
    };
    lead + mid + ln_level_sum
}

/// Natural log of the per-cardinality constant `K_c`; always finite even
/// when `K_c` itself overflows `f64`.
pub fn per_cardinality_factor_ln(
    alpha: u32,
    base: PrimeBase,
    t: u32,
    cardinality: u32,
    variant: BoundVariant,
) -> Result<f64> {
    if cardinality == 0 {
        return Err(Error::range("cardinality starts at 1"));
    }
    let consts = bound_constants(alpha, base)?;
    let level = ln_level_sum(alpha, base, variant)?;
    Ok(per_cardinality_ln_factor(&consts, alpha, base, t, cardinality, level, variant))
}

/// The per-cardinality constant `K_c`; `inf` if it exceeds `f64::MAX`.
pub fn per_cardinality_factor(
    alpha: u32,
    base: PrimeBase,
    t: u32,
    cardinality: u32,
    variant: BoundVariant,
) -> Result<f64> {
    Ok(per_cardinality_factor_ln(alpha, base, t, cardinality, variant)?.exp())
}

/// Natural log of the worst-case error bound at `n_points` evaluations.
/// Negative infinity when all weights vanish.
pub fn error_bound_ln(
    params: &BoundParameters,
    n_points: u64,
    variant: BoundVariant,
) -> Result<f64> {
    if n_points < 2 {
        return Err(Error::range("the bound needs at least two points"));
    }
    let consts = bound_constants(params.alpha, params.base)?;
    let level = ln_level_sum(params.alpha, params.base, variant)?;
    let dims = params.weights.dims()?;
    let gamma_ln = params.weights.per_cardinality_ln()?;
    let ln_n = (n_points as f64).ln();
    let ln_log_p_n = (ln_n / (params.base.value() as f64).ln()).ln();
    let mut total = f64::NEG_INFINITY;
    for c in 1..=dims {
        let ln_gamma = gamma_ln[c as usize - 1];
        if ln_gamma == f64::NEG_INFINITY {
            continue;
        }
        let ln_k = per_cardinality_ln_factor(
            &consts,
            params.alpha,
            params.base,
            params.t,
            c,
            level,
            variant,
        );
        total = ln_add(total, ln_k + ln_gamma + (params.alpha * c) as f64 * ln_log_p_n);
    }
    Ok(total - params.alpha as f64 * ln_n)
}

/// The worst-case error bound itself; `inf` when it exceeds `f64::MAX`
/// (use [`error_bound_ln`] for such regimes) and `0` when all weights are
/// zero.
pub fn error_bound(params: &BoundParameters, n_points: u64, variant: BoundVariant) -> Result<f64> {
    Ok(error_bound_ln(params, n_points, variant)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::mu_alpha;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_opening_values() {
        let b = bernoulli_numbers(9);
        let expected = [
            ratio(1, 1),
            ratio(-1, 2),
            ratio(1, 6),
            ratio(0, 1),
            ratio(-1, 30),
            ratio(0, 1),
            ratio(1, 42),
            ratio(0, 1),
            ratio(-1, 30),
        ];
        assert_eq!(b, expected);
    }

    #[test]
    fn scaled_values() {
        assert_eq!(scaled_bernoulli(1), ratio(-1, 2));
        assert_eq!(scaled_bernoulli(2), ratio(1, 12));
        assert_eq!(scaled_bernoulli(3), ratio(0, 1));
        assert_eq!(scaled_bernoulli(4), ratio(-1, 720));
    }

    #[test]
    fn classic_constants_at_smoothness_two() {
        let p2 = PrimeBase::two();
        assert_eq!(walsh_decay_constant(2, p2).unwrap(), 4.5);
        assert_eq!(weight_series_value(2, p2).unwrap(), ratio(5, 2));
        let consts = bound_constants(2, p2).unwrap();
        assert_eq!(consts.d_alpha, 0.5); // |b_1| dominates sup |b_2(x)| = 1/12
        assert_eq!(consts.c_alpha, 4.5);
        assert_eq!(consts.a_alpha, 2.5);
    }

    #[test]
    fn bernoulli_sup_of_degree_two() {
        // |B_2(x)/2| on [0,1) peaks at the endpoints with value 1/12.
        let sup = periodic_bernoulli_sup(2, 100_000);
        assert!((sup - 1.0 / 12.0).abs() < 1e-10, "{sup}");
    }

    #[test]
    fn weight_series_matches_brute_force() {
        for (alpha, p) in [(2u32, 2u32), (3, 2), (2, 3)] {
            let base = PrimeBase::new(p).unwrap();
            let exact = weight_series_value(alpha, base).unwrap().to_f64().unwrap();
            let mut partial = 0.0f64;
            for l in 0..1u64 << 16 {
                partial += (p as f64).powi(-(mu_alpha(l, alpha, base) as i32));
            }
            assert!(partial < exact, "partial sums stay below the limit");
            assert!(exact - partial < 1e-3, "alpha={alpha} p={p}: {partial} vs {exact}");
        }
    }

    #[test]
    fn smoothness_one_rejected() {
        let p2 = PrimeBase::two();
        assert!(walsh_decay_constant(1, p2).is_err());
        assert!(weight_series_value(1, p2).is_err());
        assert!(bound_constants(1, p2).is_err());
    }

    #[test]
    fn single_dimension_bound_matches_hand_rolled_formula() {
        let p2 = PrimeBase::two();
        let params = BoundParameters {
            alpha: 2,
            base: p2,
            t: 0,
            weights: Weights::Product(vec![1.0]),
        };
        // K_1 = (2*2)^2 * (A*C*E_1 + 3*D) * (|w_0|*(2*2^3)^2 + |w_1|*(2*2^2)^2)
        // with E_1 = 2^2 * (1/2 + 2^2) = 18, A = 2.5, C = 4.5, D = 0.5.
        let e1 = 4.0 * (0.5 + 4.0);
        let k1 = 16.0 * (2.5 * 4.5 * e1 + 3.0 * 0.5) * (256.0 + 2.0 * 64.0);
        for n in [1u64 << 8, 1 << 12, 1 << 16] {
            let expected = k1 * (n as f64).log2().powi(2) / (n as f64).powi(2);
            let got = error_bound(&params, n, BoundVariant::ExtrapolatedSquare).unwrap();
            assert!(
                (got - expected).abs() <= 1e-12 * expected,
                "n={n}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn zero_weights_give_zero_bound() {
        let params = BoundParameters {
            alpha: 2,
            base: PrimeBase::two(),
            t: 0,
            weights: Weights::Product(vec![0.0, 0.0]),
        };
        assert_eq!(error_bound(&params, 1024, BoundVariant::ExtrapolatedSquare).unwrap(), 0.0);
    }

    #[test]
    fn bound_decays_beyond_the_polylog_hump() {
        let params = BoundParameters {
            alpha: 2,
            base: PrimeBase::two(),
            t: 1,
            weights: Weights::Product(vec![1.0]),
        };
        for variant in [BoundVariant::ExtrapolatedSquare, BoundVariant::ExtrapolatedFixedM] {
            let mut prev = f64::INFINITY;
            for k in 4..24 {
                let bound = error_bound(&params, 1 << k, variant).unwrap();
                assert!(bound < prev, "variant {variant:?} not decreasing at 2^{k}");
                prev = bound;
            }
        }
    }

    #[test]
    fn product_and_subset_weights_agree() {
        let gammas = [0.9, 0.5, 0.25];
        let mut subset = vec![0.0f64; 8];
        for (mask, entry) in subset.iter_mut().enumerate() {
            if mask == 0 {
                continue;
            }
            *entry = (0..3).filter(|j| mask >> j & 1 == 1).map(|j| gammas[j]).product();
        }
        let a = BoundParameters {
            alpha: 3,
            base: PrimeBase::two(),
            t: 2,
            weights: Weights::Product(gammas.to_vec()),
        };
        let b = BoundParameters { weights: Weights::PerSubset(subset), ..a.clone() };
        for variant in [BoundVariant::ExtrapolatedSquare, BoundVariant::ExtrapolatedFixedM] {
            let av = error_bound(&a, 4096, variant).unwrap();
            let bv = error_bound(&b, 4096, variant).unwrap();
            assert!((av - bv).abs() <= 1e-12 * av, "{av} vs {bv}");
        }
    }

    #[test]
    fn high_dimensional_bound_stays_finite_in_log_space() {
        let gammas: Vec<f64> = (1..=100).map(|j| 1.0 / (j as f64 * j as f64)).collect();
        let params = BoundParameters {
            alpha: 2,
            base: PrimeBase::two(),
            t: 0,
            weights: Weights::Product(gammas),
        };
        let ln_bound =
            error_bound_ln(&params, 1 << 16, BoundVariant::ExtrapolatedSquare).unwrap();
        assert!(ln_bound.is_finite());
        assert_eq!(
            error_bound(&params, 1 << 16, BoundVariant::ExtrapolatedSquare).unwrap(),
            ln_bound.exp()
        );
        // The raw cardinality-100 constant is far beyond f64::MAX; only the
        // log-space form stays usable.
        let variant = BoundVariant::ExtrapolatedSquare;
        let ln_k = per_cardinality_factor_ln(2, PrimeBase::two(), 0, 100, variant).unwrap();
        assert!(ln_k.is_finite() && ln_k > 709.78);
        assert_eq!(
            per_cardinality_factor(2, PrimeBase::two(), 0, 100, variant).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn oversized_subset_table_rejected() {
        let weights = Weights::PerSubset(vec![0.0; 1 << 21]);
        assert!(weights.dims().is_err());
    }
}
