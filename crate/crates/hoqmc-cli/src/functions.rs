//! Built-in test integrands with closed-form integrals.

use hoqmc::{Error, Integrand, Result};

/// Coordinate weights `gamma_j = j^-decay` for `j = 1, ..., dims`.
pub fn power_weights(dims: u32, decay: f64) -> Vec<f64> {
    (1..=dims).map(|j| f64::from(j).powf(-decay)).collect()
}

/// The four built-in integrands over the unit cube.
#[derive(Clone, Debug)]
pub enum TestFunction {
    /// One-dimensional `x^3 (ln x + 1/4)`, defined as 0 at `x = 0` (the
    /// limit value). Integrates to exactly 0.
    CubicLog,
    /// Two-dimensional `(1/2 - xy)^6` where `xy <= 1/2`, zero elsewhere:
    /// smooth except for a kink along the hyperbola.
    KinkedPower,
    /// `prod_j (1 + gamma_j (x_j^c1 - 1/(1+c1)))`; each factor has unit
    /// mean, so the integral is exactly 1.
    ShiftedPowerProduct { c1: f64, gamma: Vec<f64> },
    /// `exp(c2 sum_j gamma_j x_j)`, a separable exponential.
    ExpSum { c2: f64, gamma: Vec<f64> },
}

impl TestFunction {
    pub fn cubic_log(dims: u32) -> Result<Self> {
        if dims != 1 {
            return Err(Error::Config(format!("f1 is one-dimensional, got dims {dims}")));
        }
        Ok(TestFunction::CubicLog)
    }

    pub fn kinked_power(dims: u32) -> Result<Self> {
        if dims != 2 {
            return Err(Error::Config(format!("f2 is two-dimensional, got dims {dims}")));
        }
        Ok(TestFunction::KinkedPower)
    }

    pub fn shifted_power_product(c1: f64, gamma: Vec<f64>) -> Result<Self> {
        if !(c1 > 1.0 && c1 < 2.0) {
            return Err(Error::Config(format!(
                "f3 exponent c1 must lie strictly between 1 and 2, got {c1}"
            )));
        }
        check_weights(&gamma)?;
        Ok(TestFunction::ShiftedPowerProduct { c1, gamma })
    }

    pub fn exp_sum(c2: f64, gamma: Vec<f64>) -> Result<Self> {
        if c2 == 0.0 || !c2.is_finite() {
            return Err(Error::Config(format!("f4 rate c2 must be finite and nonzero, got {c2}")));
        }
        check_weights(&gamma)?;
        Ok(TestFunction::ExpSum { c2, gamma })
    }

    /// Closed-form value of the integral over the unit cube.
    pub fn exact_integral(&self) -> f64 {
        match self {
            TestFunction::CubicLog => 0.0,
            TestFunction::KinkedPower => (363.0 / 140.0 + std::f64::consts::LN_2) / 896.0,
            TestFunction::ShiftedPowerProduct { .. } => 1.0,
            TestFunction::ExpSum { c2, gamma } => {
                // Each coordinate contributes (exp(c2 g) - 1) / (c2 g).
                gamma
                    .iter()
                    .map(|&g| {
                        let a = c2 * g;
                        if a == 0.0 {
                            1.0
                        } else {
                            a.exp_m1() / a
                        }
                    })
                    .product()
            }
        }
    }
}

fn check_weights(gamma: &[f64]) -> Result<()> {
    if gamma.is_empty() {
        return Err(Error::Config("need at least one coordinate weight".to_string()));
    }
    if gamma.iter().any(|g| !g.is_finite() || *g <= 0.0) {
        return Err(Error::Config("coordinate weights must be finite and positive".to_string()));
    }
    Ok(())
}

impl Integrand for TestFunction {
    fn dims(&self) -> u32 {
        match self {
            TestFunction::CubicLog => 1,
            TestFunction::KinkedPower => 2,
            TestFunction::ShiftedPowerProduct { gamma, .. }
            | TestFunction::ExpSum { gamma, .. } => gamma.len() as u32,
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::CubicLog => {
                let x = x[0];
                if x == 0.0 {
                    0.0
                } else {
                    x * x * x * (x.ln() + 0.25)
                }
            }
            TestFunction::KinkedPower => {
                let t = x[0] * x[1];
                if t <= 0.5 {
                    (0.5 - t).powi(6)
                } else {
                    0.0
                }
            }
            TestFunction::ShiftedPowerProduct { c1, gamma } => {
                let shift = 1.0 / (1.0 + c1);
                gamma
                    .iter()
                    .zip(x)
                    .map(|(&g, &xj)| 1.0 + g * (xj.powf(*c1) - shift))
                    .product()
            }
            TestFunction::ExpSum { c2, gamma } => {
                let mut dot = 0.0;
                for (&g, &xj) in gamma.iter().zip(x) {
                    dot += g * xj;
                }
                (c2 * dot).exp()
            }
        }
    }
}
