//! Randomized structural properties of the digital-net machinery.

use hoqmc::{
    expand_index, generate_net, is_dual, mu_alpha, walsh, walsh_net_mean, DigitalSequence,
    DirectionNumberTable, FixedPointCoord, GeneratingMatrix, PrimeBase,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn prime_base() -> impl Strategy<Value = PrimeBase> {
    prop_oneof![Just(2u32), Just(3), Just(5)].prop_map(|p| PrimeBase::new(p).unwrap())
}

/// A family of `dims` random generating matrices with shared shape.
fn matrix_family() -> impl Strategy<Value = Vec<GeneratingMatrix>> {
    (prime_base(), 1u32..=6, 1u32..=5, 1usize..=3, any::<u64>()).prop_map(
        |(base, rows, cols, dims, seed)| {
            let p = base.value();
            (0..dims)
                .map(|d| {
                    GeneratingMatrix::from_fn(base, rows, cols, |r, c| {
                        // Cheap splittable hash, enough to vary entries.
                        let mut z = seed
                            .wrapping_add(d as u64)
                            .wrapping_mul(0x9e3779b97f4a7c15)
                            .wrapping_add(((r as u64) << 32) | c as u64);
                        z ^= z >> 30;
                        z = z.wrapping_mul(0xbf58476d1ce4e5b9);
                        (z % p as u64) as u8
                    })
                    .unwrap()
                })
                .collect()
        },
    )
}

proptest! {
    #[test]
    fn index_digits_round_trip(base in prime_base(), length in 1u32..=8, raw in any::<u64>()) {
        let h = raw % base.pow(length).unwrap();
        let digits = expand_index(h, length, base).unwrap();
        prop_assert_eq!(digits.len() as u32, length);
        prop_assert_eq!(digits.value(), h);
    }

    #[test]
    fn coordinate_truncation_composes(
        base in prime_base(),
        precision in 2u32..=10,
        raw in any::<u64>(),
        cuts in (1u32..=10, 1u32..=10),
    ) {
        let n1 = cuts.0.min(precision);
        let n2 = cuts.1.min(precision);
        let x = FixedPointCoord::new(raw % base.pow(precision).unwrap(), precision, base).unwrap();
        let twice = x.truncate(n2.max(n1)).unwrap().truncate(n1.min(n2)).unwrap();
        let once = x.truncate(n1.min(n2)).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn digitwise_addition_is_a_group(
        base in prime_base(),
        precision in 1u32..=8,
        raws in (any::<u64>(), any::<u64>()),
    ) {
        let scale = base.pow(precision).unwrap();
        let a = FixedPointCoord::new(raws.0 % scale, precision, base).unwrap();
        let b = FixedPointCoord::new(raws.1 % scale, precision, base).unwrap();
        let zero = FixedPointCoord::zero(precision, base).unwrap();
        prop_assert_eq!(a.digitwise_add(b).unwrap(), b.digitwise_add(a).unwrap());
        prop_assert_eq!(a.digitwise_add(zero).unwrap(), a);
        // Adding a to itself p-1 more times returns to zero.
        let mut acc = a;
        for _ in 1..base.value() {
            acc = acc.digitwise_add(a).unwrap();
        }
        prop_assert_eq!(acc, zero);
    }

    #[test]
    fn walsh_characters_are_multiplicative(
        base in prime_base(),
        precision in 1u32..=8,
        k in any::<u64>(),
        raws in (any::<u64>(), any::<u64>()),
    ) {
        let scale = base.pow(precision).unwrap();
        let k = k % scale;
        let a = FixedPointCoord::new(raws.0 % scale, precision, base).unwrap();
        let b = FixedPointCoord::new(raws.1 % scale, precision, base).unwrap();
        let sum = a.digitwise_add(b).unwrap();
        prop_assert_eq!(walsh(k, a).mul(walsh(k, b)), walsh(k, sum));
    }

    #[test]
    fn dual_membership_ignores_digits_beyond_the_precision(
        mats in matrix_family(),
        raw_k in proptest::collection::vec(any::<u64>(), 3),
        raw_l in proptest::collection::vec(0u64..16, 3),
    ) {
        let base = mats[0].base();
        let n = mats[0].rows();
        let scale = base.pow(n).unwrap();
        let k: Vec<u64> = raw_k.iter().take(mats.len()).map(|r| r % scale).collect();
        let shifted: Vec<u64> = k
            .iter()
            .zip(&raw_l)
            .map(|(&kj, &lj)| kj + scale * lj)
            .collect();
        prop_assert_eq!(is_dual(&mats, &k).unwrap(), is_dual(&mats, &shifted).unwrap());
    }

    #[test]
    fn net_character_mean_is_the_dual_indicator(
        mats in matrix_family(),
        raw_k in proptest::collection::vec(any::<u64>(), 3),
    ) {
        let base = mats[0].base();
        let scale = base.pow(mats[0].rows()).unwrap();
        let k: Vec<u64> = raw_k.iter().take(mats.len()).map(|r| r % scale).collect();
        let mean = walsh_net_mean(&mats, &k).unwrap();
        let expected = if is_dual(&mats, &k).unwrap() {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
        prop_assert_eq!(mean, expected);
    }

    #[test]
    fn truncating_rows_equals_truncating_points(mats in matrix_family(), n_raw in 1u32..=6) {
        let n = n_raw.min(mats[0].rows());
        let truncated: Vec<GeneratingMatrix> =
            mats.iter().map(|m| m.top_rows(n).unwrap()).collect();
        let from_rows = generate_net(&truncated).unwrap();
        let from_points = generate_net(&mats).unwrap().truncate(n).unwrap();
        prop_assert_eq!(from_rows.precision(), from_points.precision());
        let flat_a: Vec<&[u64]> = from_rows.iter_points().collect();
        let flat_b: Vec<&[u64]> = from_points.iter_points().collect();
        prop_assert_eq!(flat_a, flat_b);
    }

    #[test]
    fn digit_weight_is_superadditive_and_monotone(
        base in prime_base(),
        alpha in 1u32..=4,
        n in 1u32..=6,
        raws in (any::<u64>(), 0u64..4096),
    ) {
        let scale = base.pow(n).unwrap();
        let k = raws.0 % scale;
        let l = raws.1;
        prop_assert!(mu_alpha(k + scale * l, alpha, base) >= mu_alpha(k, alpha, base) + mu_alpha(l, alpha, base));
        prop_assert!(mu_alpha(k, alpha + 1, base) >= mu_alpha(k, alpha, base));
        prop_assert_eq!(mu_alpha(0, alpha, base), 0);
    }

    #[test]
    fn interlaced_matrices_and_interlaced_points_agree(
        dims in 1u32..=2,
        alpha in 2u32..=3,
        m in 1u32..=4,
    ) {
        let table = DirectionNumberTable::bundled();
        let seq = DigitalSequence::interlaced_sobol(table, dims, alpha).unwrap();
        let rows = alpha * m;
        let mats = seq.matrices(rows, m).unwrap();
        let whole = generate_net(&mats).unwrap();

        let flat = DigitalSequence::sobol(DirectionNumberTable::bundled(), dims * alpha).unwrap();
        let flat_net = generate_net(&flat.matrices(m, m).unwrap()).unwrap();
        for h in 0..flat_net.len() {
            let coords: Vec<FixedPointCoord> =
                (0..flat_net.dims()).map(|j| flat_net.coord(h, j)).collect();
            let combined = hoqmc::interlace_point(&coords, alpha).unwrap();
            for (j, c) in combined.iter().enumerate() {
                prop_assert_eq!(c.truncate(rows).unwrap(), whole.coord(h, j as u32));
            }
        }
    }
}
