//! Generating matrices over the prime field.
//!
//! A digital net in base `p` with `p^m` points of `n`-digit precision is
//! described by one `n x m` matrix per coordinate. Matrices are stored
//! column-major because point generation combines whole columns. In base 2 a
//! column is a single machine word whose bit `n - k` holds row `k`
//! (1-based), so an accumulated column combination is already the numerator
//! of the resulting coordinate.

use crate::error::{Error, Result};
use crate::field::PrimeBase;

#[derive(Clone, PartialEq, Eq, Debug)]
enum Storage {
    /// Base 2: one word per column.
    Packed(Vec<u64>),
    /// Other bases: column-major digits, entry `(r, c)` at `c * rows + r`.
    Dense(Vec<u8>),
}

/// An `n x m` matrix over `F_p` generating one coordinate of a digital net.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratingMatrix {
    base: PrimeBase,
    rows: u32,
    cols: u32,
    storage: Storage,
}

impl GeneratingMatrix {
    fn check_shape(base: PrimeBase, rows: u32, cols: u32) -> Result<()> {
        if rows == 0 || cols == 0 {
            return Err(Error::range("matrix must have at least one row and column"));
        }
        let cap = base.max_digits();
        if rows > cap || cols > cap {
            return Err(Error::capacity(format!(
                "matrix shape {rows}x{cols} exceeds {cap} digits supported in base {base}"
            )));
        }
        Ok(())
    }

    /// All-zero matrix.
    pub fn zero(base: PrimeBase, rows: u32, cols: u32) -> Result<Self> {
        Self::check_shape(base, rows, cols)?;
        let storage = if base.is_binary() {
            Storage::Packed(vec![0; cols as usize])
        } else {
            Storage::Dense(vec![0; rows as usize * cols as usize])
        };
        Ok(GeneratingMatrix { base, rows, cols, storage })
    }

    /// Identity matrix, the van der Corput construction.
    pub fn identity(base: PrimeBase, size: u32) -> Result<Self> {
        Self::from_fn(base, size, size, |r, c| u8::from(r == c))
    }

    /// Builds a matrix from an entry function over 0-based `(row, col)`.
    pub fn from_fn(
        base: PrimeBase,
        rows: u32,
        cols: u32,
        mut entry: impl FnMut(u32, u32) -> u8,
    ) -> Result<Self> {
        Self::check_shape(base, rows, cols)?;
        if base.is_binary() {
            let mut columns = vec![0u64; cols as usize];
            for (c, word) in columns.iter_mut().enumerate() {
                for r in 0..rows {
                    let e = entry(r, c as u32);
                    if e > 1 {
                        return Err(Error::range(format!("entry {e} not below base 2")));
                    }
                    *word |= (e as u64) << (rows - 1 - r);
                }
            }
            Ok(GeneratingMatrix { base, rows, cols, storage: Storage::Packed(columns) })
        } else {
            let mut data = vec![0u8; rows as usize * cols as usize];
            for c in 0..cols {
                for r in 0..rows {
                    let e = entry(r, c);
                    if e as u32 >= base.value() {
                        return Err(Error::range(format!("entry {e} not below base {base}")));
                    }
                    data[(c * rows + r) as usize] = e;
                }
            }
            Ok(GeneratingMatrix { base, rows, cols, storage: Storage::Dense(data) })
        }
    }

    /// Builds a matrix from row slices (top row first); test convenience.
    pub fn from_rows(base: PrimeBase, rows: &[&[u8]]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::range("matrix must have at least one row and column"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::range("ragged rows"));
        }
        Self::from_fn(base, rows.len() as u32, cols as u32, |r, c| {
            rows[r as usize][c as usize]
        })
    }

    /// Base-2 fast path: columns given as packed words (bit `rows-1-r` holds
    /// 0-based row `r`).
    pub(crate) fn from_packed_columns(rows: u32, cols: u32, columns: Vec<u64>) -> Result<Self> {
        let base = PrimeBase::two();
        Self::check_shape(base, rows, cols)?;
        debug_assert_eq!(columns.len(), cols as usize);
        debug_assert!(rows == 64 || columns.iter().all(|&c| c < (1u64 << rows)));
        Ok(GeneratingMatrix { base, rows, cols, storage: Storage::Packed(columns) })
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn rows(&self) -> u32 {
        self.rows
    }

    pub fn cols(&self) -> u32 {
        self.cols
    }

    /// Entry at 0-based `(row, col)`.
    pub fn entry(&self, row: u32, col: u32) -> u8 {
        assert!(row < self.rows && col < self.cols, "entry index out of bounds");
        match &self.storage {
            Storage::Packed(cols) => ((cols[col as usize] >> (self.rows - 1 - row)) & 1) as u8,
            Storage::Dense(data) => data[(col * self.rows + row) as usize],
        }
    }

    /// Packed columns when stored in base 2.
    pub(crate) fn packed_columns(&self) -> Option<&[u64]> {
        match &self.storage {
            Storage::Packed(cols) => Some(cols),
            Storage::Dense(_) => None,
        }
    }

    /// Column digits (top row first) when stored densely.
    pub(crate) fn dense_column(&self, col: u32) -> Option<&[u8]> {
        match &self.storage {
            Storage::Packed(_) => None,
            Storage::Dense(data) => {
                let start = (col * self.rows) as usize;
                Some(&data[start..start + self.rows as usize])
            }
        }
    }

    /// The leading `n x m` submatrix. Taking the top `n` rows of a
    /// generating matrix truncates every generated coordinate to its first
    /// `n` digits.
    pub fn top_rows(&self, n: u32) -> Result<Self> {
        if n == 0 || n > self.rows {
            return Err(Error::range(format!(
                "cannot take {n} rows from a {}-row matrix",
                self.rows
            )));
        }
        let shift = self.rows - n;
        let storage = match &self.storage {
            Storage::Packed(cols) => Storage::Packed(cols.iter().map(|&c| c >> shift).collect()),
            Storage::Dense(data) => {
                let mut out = Vec::with_capacity(n as usize * self.cols as usize);
                for c in 0..self.cols {
                    let start = (c * self.rows) as usize;
                    out.extend_from_slice(&data[start..start + n as usize]);
                }
                Storage::Dense(out)
            }
        };
        Ok(GeneratingMatrix { base: self.base, rows: n, cols: self.cols, storage })
    }

    /// Rows rendered as base-`p` digit strings, top row first.
    pub fn digit_rows(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| char::from(b'0' + self.entry(r, c))).collect())
            .collect()
    }
}

impl std::fmt::Display for GeneratingMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for row in self.digit_rows() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Renders a family of per-coordinate matrices, one block per matrix
/// separated by blank lines.
pub fn format_matrix_blocks(matrices: &[GeneratingMatrix]) -> String {
    let mut out = String::new();
    for (j, mat) in matrices.iter().enumerate() {
        if j > 0 {
            out.push('\n');
        }
        for row in mat.digit_rows() {
            out.push_str(&row);
            out.push('\n');
        }
    }
    out
}
