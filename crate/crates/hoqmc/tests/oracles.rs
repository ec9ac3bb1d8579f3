//! Deterministic cross-module checks with independently derived expected
//! values.

use hoqmc::{
    extrapolation_weights_f64, integrate_net, regular_grid, richardson_level,
    walsh_coefficient_oracle, DigitalSequence, DirectionNumberTable, ExtrapolationTableau,
    FixedPointCoord, FnIntegrand, PrimeBase,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Distance in units in the last place, valid for same-sign finite values.
fn ulp_distance(a: f64, b: f64) -> u64 {
    assert!(a.is_finite() && b.is_finite() && (a.signum() == b.signum() || a == b));
    let (ia, ib) = (a.abs().to_bits(), b.abs().to_bits());
    ia.abs_diff(ib)
}

fn ratio(num: i64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact grid mean of x^2 at depth n: (sum of h^2 for h < 2^n) / 2^(3n).
fn exact_grid_mean(n: u32) -> BigRational {
    let count = BigInt::from(1u64 << n);
    let sum = (&count - 1) * &count * (2 * &count - 1) / BigInt::from(6);
    BigRational::new(sum, BigInt::from(1u64) << (3 * n))
}

/// The left-endpoint grid average of x^2 has an error expansion with
/// exactly two terms: mean - 1/3 = -(1/2) 2^-n + (1/6) 4^-n. The identity
/// holds exactly in rational arithmetic; the compensated float evaluation
/// must land within a few ulp of the exact mean.
#[test]
fn grid_error_expansion_for_x_squared() {
    let base = PrimeBase::two();
    let f = FnIntegrand::new(1, |x: &[f64]| x[0] * x[0]);
    for n in 1..=20u32 {
        let predicted_mean =
            ratio(1, 3) - ratio(1, 2) * ratio(1, 1 << n) + ratio(1, 6) * ratio(1, 1 << (2 * n));
        assert_eq!(exact_grid_mean(n), predicted_mean, "exact identity at n={n}");
        let mean = regular_grid(&f, n, 1, base).unwrap().estimate;
        let predicted = predicted_mean.to_f64().unwrap();
        assert!(
            ulp_distance(mean, predicted) <= 4,
            "n={n}: measured {mean:e}, predicted {predicted:e}"
        );
    }
}

/// One ratio-2 Richardson step across sizes n, n+1 must cancel the 2^-n
/// term, leaving exactly -(1/12) 4^-n.
#[test]
fn one_extrapolation_step_cancels_the_leading_grid_term() {
    let base = PrimeBase::two();
    let f = FnIntegrand::new(1, |x: &[f64]| x[0] * x[0]);
    for n in 1..=18u32 {
        let level1 = vec![
            regular_grid(&f, n, 1, base).unwrap().estimate,
            regular_grid(&f, n + 1, 1, base).unwrap().estimate,
        ];
        let stepped = richardson_level(1, &level1, base)[0];
        let exact_stepped = exact_grid_mean(n + 1) * ratio(2, 1) - exact_grid_mean(n);
        assert_eq!(
            exact_stepped,
            ratio(1, 3) - ratio(1, 12) * ratio(1, 1 << (2 * n)),
            "exact residual identity at n={n}"
        );
        let predicted = exact_stepped.to_f64().unwrap();
        assert!(
            ulp_distance(stepped, predicted) <= 4,
            "n={n}: stepped {stepped:e}, predicted {predicted:e}"
        );
    }
}

/// The recursive tableau and the closed-form weighted combination are the
/// same linear functional; on real rule values they must agree to a few
/// ulp.
#[test]
fn tableau_agrees_with_weighted_combination_on_real_data() {
    let base = PrimeBase::two();
    for alpha in 2u32..=4 {
        let table = DirectionNumberTable::bundled();
        let seq = DigitalSequence::interlaced_sobol(table, 2, alpha).unwrap();
        let f = FnIntegrand::new(2, |x: &[f64]| (1.0 + x[0] * x[1]).ln());
        let m = 6;
        let level1: Vec<f64> = (0..alpha)
            .map(|i| integrate_net(&f, &seq.matrices(m + i, m + i).unwrap()).unwrap().estimate)
            .collect();
        let tableau = ExtrapolationTableau::from_level1(base, level1.clone(), alpha);
        let recursive = tableau.value(alpha, 0).unwrap();
        let weights = extrapolation_weights_f64(alpha, base).unwrap();
        let combined: f64 = weights.iter().zip(&level1).map(|(w, v)| w * v).sum();
        assert!(
            ulp_distance(recursive, combined) <= 8,
            "alpha={alpha}: {recursive:e} vs {combined:e} ({} ulp)",
            ulp_distance(recursive, combined)
        );
    }
}

/// Walsh characters are orthonormal: the grid-sampled coefficient of a
/// character is the Kronecker delta, exactly, because a depth-n grid
/// resolves every function of the first n digits.
#[test]
fn character_coefficients_are_kronecker_deltas() {
    let base = PrimeBase::two();
    let target = 5u64;
    let f = FnIntegrand::new(1, move |x: &[f64]| {
        let coord = FixedPointCoord::new((x[0] * 8.0) as u64, 3, base).unwrap();
        hoqmc::walsh(target, coord).to_complex().re
    });
    for k in 0..8u64 {
        let c = walsh_coefficient_oracle(&f, &[k], 3, base).unwrap();
        let expected = if k == target { 1.0 } else { 0.0 };
        assert_eq!(c.re, expected, "k={k}");
        assert_eq!(c.im, 0.0, "k={k}");
    }
}

/// Streamed net integration is invariant to thread count by construction;
/// run the same job on differently sized local pools and demand identical
/// bits.
#[test]
fn integration_is_bitwise_reproducible_across_thread_counts() {
    let table = DirectionNumberTable::bundled();
    let seq = DigitalSequence::interlaced_sobol(table, 4, 2).unwrap();
    let mats = seq.matrices(12, 12).unwrap();
    let f = FnIntegrand::new(4, |x: &[f64]| (x[0] + 2.0 * x[1]).sin() * (x[2] - x[3]).cos());
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| integrate_net(&f, &mats).unwrap().estimate)
    };
    let single = run(1);
    for threads in [2, 4, 8] {
        assert_eq!(single.to_bits(), run(threads).to_bits(), "threads={threads}");
    }
}
