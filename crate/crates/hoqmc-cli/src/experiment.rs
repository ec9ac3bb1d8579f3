//! Experiment drivers: convergence sweeps over net sizes, precision sweeps
//! over digit truncation, and log-log slope fits of the observed errors.

use std::time::Instant;

use hoqmc::{
    integrate_net, DigitalSequence, Error, ExtrapolationTableau, Integrand, Result,
};

/// Quadrature algorithm selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Equal-weight rule over one net per size `m`, `N = p^m` nodes.
    Plain,
    /// Richardson extrapolation across square rules of growing size,
    /// `N = p^m + ... + p^(m + alpha - 1)` nodes.
    ExtrapolatedSquare,
    /// Richardson extrapolation across precisions at a fixed node count,
    /// `N = alpha * p^m` evaluations of `p^m` nodes.
    ExtrapolatedFixedM,
}

impl Algorithm {
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Plain => "plain",
            Algorithm::ExtrapolatedSquare => "extrapolated-square",
            Algorithm::ExtrapolatedFixedM => "extrapolated-fixed-m",
        }
    }
}

/// One fully specified sweep.
pub struct ExperimentConfig<'a> {
    pub algorithm: Algorithm,
    pub alpha: u32,
    pub sequence: &'a DigitalSequence,
    pub integrand: &'a dyn Integrand,
    pub exact: f64,
    pub m_min: u32,
    pub m_max: u32,
    /// Cap on the digit precision of the nodes (plain algorithm only).
    pub truncate_u: Option<u32>,
    /// When false, report 0.0 wall-clock seconds for byte-stable output.
    pub timing: bool,
}

/// One row of a sweep: everything needed to plot an error-decay curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub m: u32,
    /// Total integrand evaluations behind the estimate.
    pub n: u64,
    pub estimate: f64,
    pub abs_error: f64,
    pub seconds: f64,
}

impl ExperimentConfig<'_> {
    fn validate(&self) -> Result<()> {
        if self.m_min == 0 || self.m_min > self.m_max {
            return Err(Error::Config(format!(
                "size range {}..={} is empty or starts at zero",
                self.m_min, self.m_max
            )));
        }
        if self.sequence.dims() != self.integrand.dims() {
            return Err(Error::Config(format!(
                "sequence has {} coordinates but the integrand expects {}",
                self.sequence.dims(),
                self.integrand.dims()
            )));
        }
        if self.alpha == 0 {
            return Err(Error::Range("order must be at least 1".to_string()));
        }
        if let Some(u) = self.truncate_u {
            if u == 0 || u > self.sequence.base().max_digits() {
                return Err(Error::Range(format!(
                    "truncation precision {u} outside 1..={}",
                    self.sequence.base().max_digits()
                )));
            }
            if self.algorithm != Algorithm::Plain {
                return Err(Error::Config(
                    "precision truncation applies to the plain algorithm only; the \
                     extrapolated rules fix their own digit depths"
                        .to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Node digit depth for the plain rule at size `m`: full precision
    /// `alpha * m`, clamped by the numerator word and by `truncate_u`.
    fn plain_rows(&self, m: u32) -> u32 {
        let full = (self.alpha * m).min(self.sequence.base().max_digits());
        match self.truncate_u {
            Some(u) => full.min(u),
            None => full,
        }
    }
}

/// Runs one record per `m` in the configured range.
///
/// The square-rule sweep shares level-1 quadratures between neighboring
/// sizes: the `p^k`-node net feeds every tableau whose window covers `k`,
/// so a full sweep costs one integration per distinct size. Reported
/// evaluation counts are per record (shared nets count toward each record
/// they feed), matching each algorithm's nominal cost formula.
pub fn run_convergence(config: &ExperimentConfig) -> Result<Vec<ConvergenceRecord>> {
    config.validate()?;
    let seq = config.sequence;
    let alpha = config.alpha;
    let mut records = Vec::with_capacity((config.m_max - config.m_min + 1) as usize);
    match config.algorithm {
        Algorithm::Plain => {
            for m in config.m_min..=config.m_max {
                let start = Instant::now();
                let mats = seq.matrices(config.plain_rows(m), m)?;
                let q = integrate_net(config.integrand, &mats)?;
                records.push(record(config, m, q.evaluations, q.estimate, start));
            }
        }
        Algorithm::ExtrapolatedSquare => {
            // One square quadrature per distinct size, then sliding tableaus.
            let sizes = config.m_min..=(config.m_max + alpha - 1);
            let mut level1 = Vec::new();
            let mut costs = Vec::new();
            for k in sizes {
                let start = Instant::now();
                let mats = seq.matrices(k, k)?;
                let q = integrate_net(config.integrand, &mats)?;
                level1.push(q.estimate);
                costs.push((q.evaluations, start.elapsed().as_secs_f64()));
            }
            let tableau = ExtrapolationTableau::from_level1(seq.base(), level1, alpha);
            for m in config.m_min..=config.m_max {
                let i = (m - config.m_min) as usize;
                let estimate = tableau
                    .value(alpha, i)
                    .expect("sweep sizes cover every tableau window");
                let window = &costs[i..i + alpha as usize];
                let evaluations = window.iter().map(|(n, _)| n).sum();
                let seconds = window.iter().map(|(_, s)| s).sum();
                records.push(ConvergenceRecord {
                    m,
                    n: evaluations,
                    estimate,
                    abs_error: (estimate - config.exact).abs(),
                    seconds: if config.timing { seconds } else { 0.0 },
                });
            }
        }
        Algorithm::ExtrapolatedFixedM => {
            for m in config.m_min..=config.m_max {
                let start = Instant::now();
                let q = hoqmc::extrapolated_fixed_m(config.integrand, seq, alpha, m)?;
                records.push(record(config, m, q.evaluations, q.estimate, start));
            }
        }
    }
    Ok(records)
}

fn record(
    config: &ExperimentConfig,
    m: u32,
    evaluations: u64,
    estimate: f64,
    start: Instant,
) -> ConvergenceRecord {
    ConvergenceRecord {
        m,
        n: evaluations,
        estimate,
        abs_error: (estimate - config.exact).abs(),
        seconds: if config.timing { start.elapsed().as_secs_f64() } else { 0.0 },
    }
}

/// Runs the plain rule once per truncation precision in `precisions`.
pub fn precision_sweep(
    config: &ExperimentConfig,
    precisions: &[u32],
) -> Result<Vec<(u32, Vec<ConvergenceRecord>)>> {
    if precisions.is_empty() {
        return Err(Error::Config("need at least one truncation precision".to_string()));
    }
    if config.algorithm != Algorithm::Plain {
        return Err(Error::Config(
            "precision sweeps run the plain algorithm only".to_string(),
        ));
    }
    let mut out = Vec::with_capacity(precisions.len());
    for &u in precisions {
        let run = ExperimentConfig { truncate_u: Some(u), ..*config };
        out.push((u, run_convergence(&run)?));
    }
    Ok(out)
}

/// Least-squares slope of `ln(abs_error)` against `ln(N)` over the records
/// with `m` in `[m_lo, m_hi]`.
pub fn estimate_slope(records: &[ConvergenceRecord], m_lo: u32, m_hi: u32) -> Result<f64> {
    let window: Vec<_> =
        records.iter().filter(|r| r.m >= m_lo && r.m <= m_hi).collect();
    if window.len() < 3 {
        return Err(Error::Config(format!(
            "slope fit needs at least 3 records in the window, found {}",
            window.len()
        )));
    }
    if window.iter().any(|r| r.abs_error == 0.0) {
        return Err(Error::Validation(
            "a record has zero error (exact convergence); the log-log slope \
             is undefined"
                .to_string(),
        ));
    }
    let n = window.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for r in &window {
        let x = (r.n as f64).ln();
        let y = r.abs_error.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}
