//! Higher-order digital nets and sequences over prime fields, with
//! Richardson-extrapolated quasi-Monte Carlo quadrature.
//!
//! The crate builds up in layers:
//!
//! - [`field`], [`digits`], [`matrix`], [`point`]: arithmetic over a prime
//!   base `p`, digit expansions, generating matrices, and point sets whose
//!   coordinates are exact fractions `v / p^n`.
//! - [`net`], [`sobol`], [`sequence`]: digital nets from generating
//!   matrices, Sobol' direction numbers (a 321-dimension table is bundled),
//!   and digit interlacing, which converts `alpha * s` ordinary coordinates
//!   into `s` coordinates whose nets integrate smooth functions with error
//!   `O(N^-alpha)`.
//! - [`dual`], [`walsh`]: the dual-group and Walsh-character machinery used
//!   to verify net quality exhaustively on small instances.
//! - [`summation`], [`integrand`], [`quadrature`], [`extrapolate`]:
//!   deterministic block-parallel averaging over nets and grids, plus
//!   Richardson extrapolation across net sizes (or digit precisions), which
//!   recovers order-`alpha` convergence from truncated points.
//! - [`bounds`]: closed-form worst-case error bounds for the extrapolated
//!   rules, evaluated in log space so that high-dimensional constants do
//!   not overflow.
//!
//! # Example
//!
//! ```
//! use hoqmc::{extrapolated_square, DigitalSequence, DirectionNumberTable, FnIntegrand};
//!
//! // Integrate f(x, y) = exp(x + y) with an order-2 rule.
//! let table = DirectionNumberTable::bundled();
//! let seq = DigitalSequence::interlaced_sobol(table, 2, 2).unwrap();
//! let f = FnIntegrand::new(2, |x: &[f64]| (x[0] + x[1]).exp());
//! let q = extrapolated_square(&f, &seq, 2, 10).unwrap();
//! let exact = (std::f64::consts::E - 1.0) * (std::f64::consts::E - 1.0);
//! assert!((q.estimate - exact).abs() < 1e-6);
//! ```

pub mod bounds;
pub mod digits;
pub mod dual;
pub mod error;
pub mod extrapolate;
pub mod field;
pub mod integrand;
pub mod matrix;
pub mod net;
pub mod point;
pub mod quadrature;
pub mod sequence;
pub mod sobol;
pub mod summation;
pub mod walsh;

/// Hard cap on exhaustive enumerations (dual-group scans, grid oracles,
/// streamed net evaluations): `2^26` items.
pub const MAX_ENUMERATION: u64 = 1 << 26;

pub use bounds::{
    bernoulli_numbers, bound_constants, error_bound, error_bound_ln, per_cardinality_factor,
    per_cardinality_factor_ln, periodic_bernoulli_sup, scaled_bernoulli, walsh_decay_constant,
    weight_series_value, BoundConstants, BoundParameters, BoundVariant, Weights,
};
pub use digits::{expand_index, nu, DigitVector};
pub use dual::{enumerate_dual, inferred_t, is_dual, mu_alpha, mu_alpha_vec, net_strength};
pub use error::{Error, Result};
pub use extrapolate::{
    extrapolated_fixed_m, extrapolated_square, extrapolation_weights, extrapolation_weights_f64,
    richardson_level, weights_abs_sum_f64, weights_sum, ExtrapolationTableau,
};
pub use field::PrimeBase;
pub use integrand::{FnIntegrand, Integrand};
pub use matrix::GeneratingMatrix;
pub use net::{generate_net, generate_point};
pub use point::{FixedPointCoord, PointSet, MAX_POINT_SET_ENTRIES};
pub use quadrature::{integrate_net, integrate_point_set, regular_grid, Quadrature, BLOCK_SIZE};
pub use sequence::{
    interlace_matrices, interlace_point, interlaced_t_bound, DigitalSequence, InterlaceScope,
};
pub use sobol::{sobol_matrices, DirectionNumberTable, DirectionRecord};
pub use summation::{compensated_sum, Accumulator};
pub use walsh::{
    walsh, walsh_coefficient_oracle, walsh_grid_mean, walsh_net_mean, walsh_vec,
    ExponentHistogram, WalshValue,
};
