//! The integrand abstraction shared by every quadrature entry point.

/// A real-valued function on the unit cube `[0,1)^s`.
///
/// Implementations must be `Sync` so point sets can be evaluated in
/// parallel, and `eval` must be a pure function of its argument — the
/// deterministic-output guarantee of the quadrature routines depends on it.
pub trait Integrand: Sync {
    /// Number of coordinates `eval` expects.
    fn dims(&self) -> u32;

    /// Evaluates the function at a point; `x.len()` equals `self.dims()`.
    fn eval(&self, x: &[f64]) -> f64;
}

/// Adapter turning a closure into an [`Integrand`].
pub struct FnIntegrand<F: Fn(&[f64]) -> f64 + Sync> {
    dims: u32,
    f: F,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnIntegrand<F> {
    pub fn new(dims: u32, f: F) -> Self {
        assert!(dims > 0, "integrand needs at least one dimension");
        FnIntegrand { dims, f }
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> Integrand for FnIntegrand<F> {
    fn dims(&self) -> u32 {
        self.dims
    }

    fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dims as usize);
        (self.f)(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_adapter_evaluates() {
        let f = FnIntegrand::new(2, |x: &[f64]| x[0] + 2.0 * x[1]);
        assert_eq!(f.dims(), 2);
        assert_eq!(f.eval(&[0.25, 0.5]), 1.25);
    }
}
