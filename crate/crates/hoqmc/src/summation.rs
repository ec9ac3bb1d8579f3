//! Compensated floating-point summation.
//!
//! Quadrature rules here sum up to `2^26` terms whose partial cancellation
//! is the whole point (error decay faster than `1/N`), so naive summation
//! noise would show up in convergence plots. A Neumaier accumulator keeps a
//! running compensation term and recovers almost all of the low-order bits;
//! crucially it is also associative enough for our purposes: accumulators
//! can be merged, and summing fixed-size blocks in a fixed order gives
//! bit-identical results no matter how the blocks were computed.

/// Neumaier (improved Kahan) summation state.
#[derive(Clone, Copy, Debug, Default)]
pub struct Accumulator {
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator in, preserving its compensation term.
    pub fn merge(&mut self, other: Accumulator) {
        self.add(other.sum);
        self.compensation += other.compensation;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Sums a slice with compensation.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut acc = Accumulator::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}
