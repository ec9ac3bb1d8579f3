//! Extensible matrix families and digit interlacing.
//!
//! A [`DigitalSequence`] produces the leading `rows x cols` submatrix of an
//! infinite generating-matrix family on demand; growing either dimension of
//! a request extends, and never alters, previously returned entries.
//!
//! Interlacing of factor `alpha` turns `alpha * s` order-1 matrices into
//! `s` higher-order ones by interleaving rows: row `alpha*(l-1) + h` of the
//! output (1-based) is row `l` of input matrix `alpha*(j-1) + h`. The same
//! permutation applied to coordinate digits maps points of the order-1 net
//! to points of the interlaced net, so the two construction paths agree.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::PrimeBase;
use crate::matrix::GeneratingMatrix;
use crate::point::FixedPointCoord;
use crate::sobol::{sobol_matrices, DirectionNumberTable};

#[derive(Clone, Debug)]
enum Kind {
    Sobol(Arc<DirectionNumberTable>),
    Interlaced { inner: Box<DigitalSequence>, alpha: u32 },
}

/// An `s`-dimensional digital sequence: a generator of `rows x cols`
/// matrix families for any requested shape within capacity.
#[derive(Clone, Debug)]
pub struct DigitalSequence {
    base: PrimeBase,
    dims: u32,
    kind: Kind,
}

impl DigitalSequence {
    /// Sobol' sequence over the given direction-number table (base 2).
    pub fn sobol(table: Arc<DirectionNumberTable>, dims: u32) -> Result<Self> {
        if dims == 0 {
            return Err(Error::range("need at least one dimension"));
        }
        if dims > table.dimensions() {
            return Err(Error::config(format!(
                "{dims} dimensions requested but the table covers only {}",
                table.dimensions()
            )));
        }
        Ok(DigitalSequence { base: PrimeBase::two(), dims, kind: Kind::Sobol(table) })
    }

    /// Interlaces this sequence by `alpha`, contracting each block of
    /// `alpha` consecutive coordinates into one higher-order coordinate.
    pub fn interlace(self, alpha: u32) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::range("interlacing factor must be positive"));
        }
        if alpha == 1 {
            return Ok(self);
        }
        if self.dims % alpha != 0 {
            return Err(Error::config(format!(
                "cannot interlace {} coordinates by {alpha}",
                self.dims
            )));
        }
        Ok(DigitalSequence {
            base: self.base,
            dims: self.dims / alpha,
            kind: Kind::Interlaced { inner: Box::new(self), alpha },
        })
    }

    /// Order-`alpha` Sobol' sequence: `alpha * dims` base coordinates
    /// interlaced down to `dims`.
    pub fn interlaced_sobol(
        table: Arc<DirectionNumberTable>,
        dims: u32,
        alpha: u32,
    ) -> Result<Self> {
        let base_dims = dims
            .checked_mul(alpha)
            .ok_or_else(|| Error::range("alpha * dims overflows"))?;
        Self::sobol(table, base_dims)?.interlace(alpha)
    }

    pub fn base(&self) -> PrimeBase {
        self.base
    }

    pub fn dims(&self) -> u32 {
        self.dims
    }

    /// Product of interlacing factors applied on top of the order-1 family.
    pub fn order(&self) -> u32 {
        match &self.kind {
            Kind::Sobol(_) => 1,
            Kind::Interlaced { inner, alpha } => inner.order() * alpha,
        }
    }

    /// Upper bound on the depth of column `l` (1-based): the largest row
    /// index that can hold a nonzero entry.
    pub fn column_depth(&self, l: u32) -> u32 {
        match &self.kind {
            Kind::Sobol(_) => l,
            Kind::Interlaced { inner, alpha } => alpha * inner.column_depth(l),
        }
    }

    /// Precision at which an `m`-column net from this family carries full
    /// information: `order * m` digits.
    pub fn full_precision(&self, cols: u32) -> u32 {
        self.order() * cols
    }

    /// The `rows x cols` matrix family.
    pub fn matrices(&self, rows: u32, cols: u32) -> Result<Vec<GeneratingMatrix>> {
        match &self.kind {
            Kind::Sobol(table) => sobol_matrices(table, self.dims, rows, cols),
            Kind::Interlaced { inner, alpha } => {
                // ceil(rows / alpha) base rows interlace to at least `rows`.
                let inner_rows = rows.div_ceil(*alpha);
                let base_mats = inner.matrices(inner_rows, cols)?;
                let full = interlace_matrices(&base_mats, *alpha)?;
                full.iter().map(|m| m.top_rows(rows)).collect()
            }
        }
    }
}

/// Row-interleaves `alpha * s` matrices into `s` matrices of `alpha * n`
/// rows. All inputs must share one shape.
pub fn interlace_matrices(
    matrices: &[GeneratingMatrix],
    alpha: u32,
) -> Result<Vec<GeneratingMatrix>> {
    let (base, rows, cols) = crate::net::check_family(matrices)?;
    if alpha == 0 || matrices.len() as u32 % alpha != 0 {
        return Err(Error::config(format!(
            "cannot interlace {} matrices by {alpha}",
            matrices.len()
        )));
    }
    let out_rows = alpha
        .checked_mul(rows)
        .filter(|&r| r <= base.max_digits())
        .ok_or_else(|| {
            Error::capacity(format!(
                "interlaced precision {alpha} * {rows} exceeds {} digits in base {base}",
                base.max_digits()
            ))
        })?;
    let s = matrices.len() as u32 / alpha;
    (0..s)
        .map(|j| {
            GeneratingMatrix::from_fn(base, out_rows, cols, |r, c| {
                matrices[(alpha * j + r % alpha) as usize].entry(r / alpha, c)
            })
        })
        .collect()
}

/// Digit-interleaves a point of `alpha * s` coordinates with `n` digits
/// each into `s` coordinates with `alpha * n` digits: output digit
/// `alpha*(i-1) + h` of coordinate `j` is digit `i` of input coordinate
/// `alpha*(j-1) + h`.
pub fn interlace_point(
    coords: &[FixedPointCoord],
    alpha: u32,
) -> Result<Vec<FixedPointCoord>> {
    if coords.is_empty() || alpha == 0 || coords.len() as u32 % alpha != 0 {
        return Err(Error::config(format!(
            "cannot interlace {} coordinates by {alpha}",
            coords.len()
        )));
    }
    let base = coords[0].base();
    let n = coords[0].precision();
    if coords.iter().any(|c| c.base() != base || c.precision() != n) {
        return Err(Error::config(
            "interlacing requires a uniform base and precision",
        ));
    }
    let out_precision = alpha
        .checked_mul(n)
        .filter(|&r| r <= base.max_digits())
        .ok_or_else(|| {
            Error::capacity(format!(
                "interlaced precision {alpha} * {n} exceeds {} digits in base {base}",
                base.max_digits()
            ))
        })?;
    let p = base.value() as u64;
    let s = coords.len() as u32 / alpha;
    (0..s)
        .map(|j| {
            let mut v = 0u64;
            for i in 1..=n {
                for h in 1..=alpha {
                    let digit = coords[(alpha * j + h - 1) as usize].digit(i);
                    v = v * p + digit as u64;
                }
            }
            FixedPointCoord::new(v, out_precision, base)
        })
        .collect()
}

/// Quality-parameter carry-over for digit interlacing.
#[derive(Clone, Copy, Debug)]
pub enum InterlaceScope {
    /// A finite net with `m`-column matrices.
    Net { cols: u32 },
    /// An extensible sequence.
    Sequence,
}

/// Worst-case quality parameter of the order-`alpha` net or sequence
/// obtained by interlacing a `(t, ...)`-net or sequence in `alpha * dims`
/// coordinates down to `dims`.
pub fn interlaced_t_bound(t: u64, alpha: u32, dims: u32, scope: InterlaceScope) -> u64 {
    let alpha = alpha as u64;
    let dims = dims as u64;
    match scope {
        InterlaceScope::Net { cols } => alpha * (cols as u64).min(t + dims * (alpha - 1) / 2),
        InterlaceScope::Sequence => alpha * t + dims * alpha * (alpha - 1) / 2,
    }
}
