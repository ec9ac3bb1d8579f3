//! Digital net point generation.
//!
//! Point `h` of the net generated by matrices `C_1, ..., C_s` has, in
//! coordinate `j`, the digit vector `C_j * (eta_0, ..., eta_{m-1})^T` over
//! `F_p`, where `eta` is the base-`p` expansion of `h` (least significant
//! digit first). Incrementing `h` changes digits `0..=c`, where `c` is the
//! number of trailing `p-1` digits, and each changed digit rises by one
//! modulo `p`; a sequential scan therefore adds columns `0..=c` into a
//! running per-coordinate state instead of recombining all `m` columns.

use crate::error::{Error, Result};
use crate::field::PrimeBase;
use crate::matrix::GeneratingMatrix;
use crate::point::{FixedPointCoord, PointSet, MAX_POINT_SET_ENTRIES};

/// Checks that a matrix family describes one digital net: same base and
/// shape in every coordinate. Returns `(base, rows, cols)`.
pub(crate) fn check_family(matrices: &[GeneratingMatrix]) -> Result<(PrimeBase, u32, u32)> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::config("matrix family is empty"))?;
    let shape = (first.base(), first.rows(), first.cols());
    for m in &matrices[1..] {
        if (m.base(), m.rows(), m.cols()) != shape {
            return Err(Error::config(
                "matrix family mixes bases or shapes",
            ));
        }
    }
    Ok(shape)
}

/// Generates the single point with index `h < p^m`.
pub fn generate_point(matrices: &[GeneratingMatrix], h: u64) -> Result<Vec<FixedPointCoord>> {
    let (base, rows, cols) = check_family(matrices)?;
    let digits = crate::digits::expand_index(h, cols, base)?;
    let mut out = Vec::with_capacity(matrices.len());
    for mat in matrices {
        let numerator = combine_columns(mat, digits.as_slice());
        out.push(FixedPointCoord::new(numerator, rows, base)?);
    }
    Ok(out)
}

fn combine_columns(mat: &GeneratingMatrix, index_digits: &[u8]) -> u64 {
    if let Some(cols) = mat.packed_columns() {
        let mut acc = 0u64;
        for (l, &d) in index_digits.iter().enumerate() {
            if d == 1 {
                acc ^= cols[l];
            }
        }
        acc
    } else {
        let base = mat.base();
        let rows = mat.rows() as usize;
        let mut digits = vec![0u32; rows];
        for (l, &d) in index_digits.iter().enumerate() {
            if d != 0 {
                let col = mat.dense_column(l as u32).unwrap();
                for (acc, &e) in digits.iter_mut().zip(col) {
                    *acc += d as u32 * e as u32;
                }
            }
        }
        let p = base.value() as u64;
        digits.iter().fold(0u64, |v, &d| v * p + (d % base.value()) as u64)
    }
}

/// Generates all `p^m` points in index order.
pub fn generate_net(matrices: &[GeneratingMatrix]) -> Result<PointSet> {
    let (base, rows, cols) = check_family(matrices)?;
    let count = base.pow(cols)?;
    let dims = matrices.len() as u64;
    if count.saturating_mul(dims) > MAX_POINT_SET_ENTRIES {
        return Err(Error::capacity(format!(
            "net with {count} points x {dims} dims exceeds the materialization cap; \
             use streaming quadrature instead"
        )));
    }
    let mut numerators = vec![0u64; (count * dims) as usize];
    let mut cursor = NetCursor::new(matrices, 0)?;
    let s = dims as usize;
    for h in 0..count as usize {
        cursor.write_numerators(&mut numerators[h * s..(h + 1) * s]);
        if (h as u64) + 1 < count {
            cursor.advance();
        }
    }
    PointSet::from_numerators(base, dims as u32, rows, numerators)
}

enum CursorState {
    /// Base 2: one numerator word per coordinate.
    Packed(Vec<u64>),
    /// General base: index digits plus per-coordinate digit columns
    /// (top row first).
    Dense { index_digits: Vec<u8>, coord_digits: Vec<u8> },
}

/// Sequential point scanner starting at an arbitrary index.
pub(crate) struct NetCursor<'a> {
    matrices: &'a [GeneratingMatrix],
    base: PrimeBase,
    rows: u32,
    h: u64,
    state: CursorState,
}

impl<'a> NetCursor<'a> {
    pub(crate) fn new(matrices: &'a [GeneratingMatrix], start: u64) -> Result<Self> {
        let (base, rows, cols) = check_family(matrices)?;
        let digits = crate::digits::expand_index(start, cols, base)?;
        let state = if base.is_binary() {
            CursorState::Packed(
                matrices
                    .iter()
                    .map(|m| combine_columns(m, digits.as_slice()))
                    .collect(),
            )
        } else {
            let rows_us = rows as usize;
            let mut coord_digits = vec![0u8; matrices.len() * rows_us];
            for (j, mat) in matrices.iter().enumerate() {
                let mut acc = vec![0u32; rows_us];
                for (l, &d) in digits.as_slice().iter().enumerate() {
                    if d != 0 {
                        let col = mat.dense_column(l as u32).unwrap();
                        for (a, &e) in acc.iter_mut().zip(col) {
                            *a += d as u32 * e as u32;
                        }
                    }
                }
                for (out, &a) in coord_digits[j * rows_us..].iter_mut().zip(&acc) {
                    *out = base.reduce(a);
                }
            }
            CursorState::Dense { index_digits: digits.as_slice().to_vec(), coord_digits }
        };
        Ok(NetCursor { matrices, base, rows, h: start, state })
    }

    /// Steps to index `h + 1`.
    pub(crate) fn advance(&mut self) {
        match &mut self.state {
            CursorState::Packed(state) => {
                let changed = self.h.trailing_ones();
                for (word, mat) in state.iter_mut().zip(self.matrices) {
                    let cols = mat.packed_columns().unwrap();
                    for &col in &cols[..=changed as usize] {
                        *word ^= col;
                    }
                }
            }
            CursorState::Dense { index_digits, coord_digits } => {
                let p_top = (self.base.value() - 1) as u8;
                let rows = self.rows as usize;
                let mut l = 0;
                loop {
                    for (j, mat) in self.matrices.iter().enumerate() {
                        let col = mat.dense_column(l as u32).unwrap();
                        let state = &mut coord_digits[j * rows..(j + 1) * rows];
                        for (a, &e) in state.iter_mut().zip(col) {
                            *a = self.base.add(*a, e);
                        }
                    }
                    if index_digits[l] < p_top {
                        index_digits[l] += 1;
                        break;
                    }
                    index_digits[l] = 0;
                    l += 1;
                }
            }
        }
        self.h += 1;
    }

    /// Writes the current point's numerators, one per coordinate.
    pub(crate) fn write_numerators(&self, out: &mut [u64]) {
        match &self.state {
            CursorState::Packed(state) => out.copy_from_slice(state),
            CursorState::Dense { coord_digits, .. } => {
                let p = self.base.value() as u64;
                let rows = self.rows as usize;
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = coord_digits[j * rows..(j + 1) * rows]
                        .iter()
                        .fold(0u64, |v, &d| v * p + d as u64);
                }
            }
        }
    }
}
