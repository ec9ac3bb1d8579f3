//! CSV and JSON emission. All float formatting is deterministic (shortest
//! round-trip notation), so identical runs produce identical bytes.

use std::io::Write;

use serde::Serialize;

use hoqmc::{BoundConstants, PointSet, PrimeBase, Result};

use crate::experiment::ConvergenceRecord;

/// Writes sweep records as `m,N,estimate,abs_error,seconds` rows.
pub fn write_records_csv(out: &mut dyn Write, records: &[ConvergenceRecord]) -> Result<()> {
    writeln!(out, "m,N,estimate,abs_error,seconds")?;
    for r in records {
        writeln!(out, "{},{},{:e},{:e},{:e}", r.m, r.n, r.estimate, r.abs_error, r.seconds)?;
    }
    Ok(())
}

/// Precision-sweep rows carry a leading truncation column `u`.
pub fn write_precision_csv(
    out: &mut dyn Write,
    sweeps: &[(u32, Vec<ConvergenceRecord>)],
) -> Result<()> {
    writeln!(out, "u,m,N,estimate,abs_error,seconds")?;
    for (u, records) in sweeps {
        for r in records {
            writeln!(
                out,
                "{},{},{},{:e},{:e},{:e}",
                u, r.m, r.n, r.estimate, r.abs_error, r.seconds
            )?;
        }
    }
    Ok(())
}

/// One sweep row with its full context, for machine consumption.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub algorithm: &'static str,
    pub alpha: u32,
    pub p: u32,
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub estimate: f64,
    pub exact: f64,
    pub abs_error: f64,
    pub evaluations: u64,
}

pub fn run_records(
    algorithm: &'static str,
    alpha: u32,
    base: PrimeBase,
    exact: f64,
    records: &[ConvergenceRecord],
) -> Vec<RunRecord> {
    records
        .iter()
        .map(|r| RunRecord {
            algorithm,
            alpha,
            p: base.value(),
            m: r.m,
            n: r.n,
            estimate: r.estimate,
            exact,
            abs_error: r.abs_error,
            evaluations: r.n,
        })
        .collect()
}

/// A [`RunRecord`] tagged with its truncation precision.
#[derive(Clone, Debug, Serialize)]
pub struct PrecisionRecord {
    pub u: u32,
    #[serde(flatten)]
    pub record: RunRecord,
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| std::io::Error::other(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Worst-case error-bound diagnostics: the three closed-form constants and
/// the per-cardinality factors `U_c` for `c = 1, ..., dims`. Factors that
/// overflow `f64` serialize as JSON `null`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    #[serde(rename = "C_alpha")]
    pub c_alpha: f64,
    #[serde(rename = "A_alpha")]
    pub a_alpha: f64,
    #[serde(rename = "D_alpha")]
    pub d_alpha: f64,
    #[serde(rename = "U_per_cardinality")]
    pub u_per_cardinality: Vec<f64>,
}

impl BoundReport {
    pub fn new(constants: BoundConstants, u_per_cardinality: Vec<f64>) -> Self {
        BoundReport {
            c_alpha: constants.c_alpha,
            a_alpha: constants.a_alpha,
            d_alpha: constants.d_alpha,
            u_per_cardinality,
        }
    }
}

/// Emits net nodes as `h,x1,...,xs` rows, either as exact fractions
/// `v/p^n` or as shortest round-trip decimals.
pub fn write_points_csv(out: &mut dyn Write, points: &PointSet, decimal: bool) -> Result<()> {
    write!(out, "h")?;
    for j in 1..=points.dims() {
        write!(out, ",x{j}")?;
    }
    writeln!(out)?;
    let denominator = points.base().pow(points.precision())?;
    for h in 0..points.len() {
        write!(out, "{h}")?;
        for j in 0..points.dims() {
            let coord = points.coord(h, j);
            if decimal {
                write!(out, ",{}", coord.to_real())?;
            } else {
                write!(out, ",{}/{}", coord.numerator(), denominator)?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
