//! Equal-weight quadrature over point sets, digital nets, and regular grids.
//!
//! All entry points share a fixed-block summation scheme: points are
//! processed in blocks of [`BLOCK_SIZE`] consecutive indices, each block is
//! summed into its own compensated accumulator, and the block results are
//! merged in index order. Blocks may be computed on any number of threads —
//! the merge order, and therefore the floating-point result, never changes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::PrimeBase;
use crate::integrand::Integrand;
use crate::matrix::GeneratingMatrix;
use crate::net::{check_family, NetCursor};
use crate::point::{numerator_to_real, PointSet};
use crate::summation::Accumulator;
use crate::MAX_ENUMERATION;

/// Number of consecutive points summed per compensated block.
pub const BLOCK_SIZE: u64 = 1 << 12;

/// Result of an equal-weight quadrature rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    /// The average of `f` over the point set.
    pub estimate: f64,
    /// Number of function evaluations performed.
    pub evaluations: u64,
}

fn merge_blocks(blocks: Vec<Accumulator>, count: u64) -> Quadrature {
    let mut total = Accumulator::new();
    for block in blocks {
        total.merge(block);
    }
    Quadrature { estimate: total.value() / count as f64, evaluations: count }
}

/// Averages `f` over an explicit point set.
pub fn integrate_point_set(f: &dyn Integrand, points: &PointSet) -> Result<Quadrature> {
    if f.dims() != points.dims() {
        return Err(Error::config(format!(
            "integrand expects {} dimensions, point set has {}",
            f.dims(),
            points.dims()
        )));
    }
    let count = points.len() as u64;
    if count == 0 {
        return Err(Error::config("cannot average over an empty point set"));
    }
    let n_blocks = count.div_ceil(BLOCK_SIZE);
    let blocks: Vec<Accumulator> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * BLOCK_SIZE;
            let end = (start + BLOCK_SIZE).min(count);
            let mut x = vec![0.0f64; f.dims() as usize];
            let mut acc = Accumulator::new();
            for h in start..end {
                points.write_real(h as usize, &mut x);
                acc.add(f.eval(&x));
            }
            acc
        })
        .collect();
    Ok(merge_blocks(blocks, count))
}

/// Averages `f` over the digital net generated by `matrices` without
/// materialising the points. The net has `p^cols` points; the evaluation
/// count is capped at `2^26`.
pub fn integrate_net(f: &dyn Integrand, matrices: &[GeneratingMatrix]) -> Result<Quadrature> {
    let (base, rows, cols) = check_family(matrices)?;
    if f.dims() != matrices.len() as u32 {
        return Err(Error::config(format!(
            "integrand expects {} dimensions, net has {}",
            f.dims(),
            matrices.len()
        )));
    }
    let count = base.pow(cols)?;
    if count > MAX_ENUMERATION {
        return Err(Error::capacity(format!(
            "{base}^{cols} evaluations exceed the {MAX_ENUMERATION} cap"
        )));
    }
    let n_blocks = count.div_ceil(BLOCK_SIZE);
    let blocks: Vec<Accumulator> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * BLOCK_SIZE;
            let end = (start + BLOCK_SIZE).min(count);
            let mut cursor =
                NetCursor::new(matrices, start).expect("family and start index already validated");
            let dims = matrices.len();
            let mut numerators = vec![0u64; dims];
            let mut x = vec![0.0f64; dims];
            let mut acc = Accumulator::new();
            for h in start..end {
                cursor.write_numerators(&mut numerators);
                for (xj, &v) in x.iter_mut().zip(&numerators) {
                    *xj = numerator_to_real(v, rows, base);
                }
                acc.add(f.eval(&x));
                if h + 1 < end {
                    cursor.advance();
                }
            }
            acc
        })
        .collect();
    Ok(merge_blocks(blocks, count))
}

/// Averages `f` over the left-endpoint regular grid with `p^n` levels per
/// axis, `p^{ns}` points in total (capped at `2^26`).
pub fn regular_grid(f: &dyn Integrand, n: u32, dims: u32, base: PrimeBase) -> Result<Quadrature> {
    if dims == 0 || f.dims() != dims {
        return Err(Error::config(format!(
            "integrand expects {} dimensions, grid has {dims}",
            f.dims()
        )));
    }
    let per_axis = base.pow(n)?;
    let count = per_axis
        .checked_pow(dims)
        .filter(|&t| t <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::capacity(format!(
                "{base}^{} grid evaluations exceed the {MAX_ENUMERATION} cap",
                n as u64 * dims as u64
            ))
        })?;
    let scale = per_axis as f64;
    let mut grid = vec![0u64; dims as usize];
    let mut x = vec![0.0f64; dims as usize];
    let mut blocks = Vec::with_capacity(count.div_ceil(BLOCK_SIZE) as usize);
    let mut acc = Accumulator::new();
    for step in 0..count {
        for (xj, &gj) in x.iter_mut().zip(grid.iter()) {
            *xj = gj as f64 / scale;
        }
        acc.add(f.eval(&x));
        if (step + 1) % BLOCK_SIZE == 0 {
            blocks.push(acc);
            acc = Accumulator::new();
        }
        if step + 1 < count {
            for g in grid.iter_mut() {
                *g += 1;
                if *g < per_axis {
                    break;
                }
                *g = 0;
            }
        }
    }
    if count % BLOCK_SIZE != 0 {
        blocks.push(acc);
    }
    Ok(merge_blocks(blocks, count))
}
