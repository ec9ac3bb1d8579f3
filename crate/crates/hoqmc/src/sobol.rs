//! Sobol' generating matrices from direction-number files.
//!
//! The data format is the widely used `d s a m_i` layout: one row per
//! dimension `d >= 2` giving the degree `s` of that dimension's primitive
//! polynomial over `F_2`, the packed middle coefficients `a`, and the first
//! `s` odd initial values `m_i < 2^i`. Dimension 1 is the van der Corput
//! identity matrix by convention and appears in no file. Column `l` of the
//! generating matrix holds the binary digits of `m_l / 2^l`, so entries
//! below the diagonal profile vanish: the column depth satisfies
//! `K(l) <= l`, which is what makes row truncation and digit interlacing
//! well defined at any requested precision.

use std::path::Path;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::matrix::GeneratingMatrix;

/// Direction-number data for one Sobol' dimension.
#[derive(Clone, Debug)]
pub struct DirectionRecord {
    /// Dimension index, 2-based (dimension 1 is the identity).
    pub dimension: u32,
    /// Degree of the primitive polynomial.
    pub degree: u32,
    /// Middle polynomial coefficients packed most significant first.
    pub a: u64,
    /// Initial values `m_1, ..., m_s`.
    pub m: Vec<u64>,
}

/// A parsed direction-number table covering dimensions `2..=max`.
#[derive(Clone, Debug)]
pub struct DirectionNumberTable {
    records: Vec<DirectionRecord>,
}

const BUNDLED_TEXT: &str = include_str!("../data/sobol-direction-numbers.txt");

static BUNDLED: OnceLock<Arc<DirectionNumberTable>> = OnceLock::new();

impl DirectionNumberTable {
    /// Parses `d s a m_i` text. A non-numeric header line is skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_number = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if line_number == 1 && fields[0].parse::<u64>().is_err() {
                continue; // header row
            }
            let parse_field = |text: &str| -> Result<u64> {
                text.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_number,
                    message: format!("expected integer, found {text:?}"),
                })
            };
            if fields.len() < 4 {
                return Err(Error::Parse {
                    line: line_number,
                    message: "expected at least `d s a m_1`".into(),
                });
            }
            let dimension = parse_field(fields[0])?;
            let degree = parse_field(fields[1])?;
            let a = parse_field(fields[2])?;
            let m = fields[3..]
                .iter()
                .map(|f| parse_field(f))
                .collect::<Result<Vec<u64>>>()?;
            let record = DirectionRecord {
                dimension: u32::try_from(dimension).map_err(|_| Error::Parse {
                    line: line_number,
                    message: "dimension out of range".into(),
                })?,
                degree: degree as u32,
                a,
                m,
            };
            validate_record(&record, line_number, records.len())?;
            records.push(record);
        }
        if records.is_empty() {
            return Err(Error::validation("direction-number table is empty"));
        }
        Ok(DirectionNumberTable { records })
    }

    /// Loads a file in `d s a m_i` format.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The table shipped with the crate (321 dimensions).
    pub fn bundled() -> Arc<DirectionNumberTable> {
        BUNDLED
            .get_or_init(|| {
                Arc::new(Self::parse(BUNDLED_TEXT).expect("bundled direction-number table is valid"))
            })
            .clone()
    }

    /// Highest dimension this table supports, counting the implicit
    /// identity dimension.
    pub fn dimensions(&self) -> u32 {
        self.records.len() as u32 + 1
    }

    /// Record for dimension `d >= 2`.
    pub fn record(&self, dimension: u32) -> Option<&DirectionRecord> {
        if dimension < 2 {
            return None;
        }
        self.records.get(dimension as usize - 2)
    }
}

fn validate_record(record: &DirectionRecord, line: usize, index: usize) -> Result<()> {
    let expected_dim = index as u32 + 2;
    let fail = |message: String| Error::Parse { line, message };
    if record.dimension != expected_dim {
        return Err(fail(format!(
            "dimension {} out of order, expected {expected_dim}",
            record.dimension
        )));
    }
    if record.degree == 0 || record.degree > 62 {
        return Err(fail(format!("degree {} out of range", record.degree)));
    }
    if record.m.len() != record.degree as usize {
        return Err(fail(format!(
            "expected {} initial values, found {}",
            record.degree,
            record.m.len()
        )));
    }
    if record.degree >= 2 && record.a >= 1 << (record.degree - 1) {
        return Err(fail(format!(
            "coefficient code {} too large for degree {}",
            record.a, record.degree
        )));
    }
    if record.degree == 1 && record.a != 0 {
        return Err(fail("degree-1 polynomial admits no middle coefficients".into()));
    }
    for (i, &v) in record.m.iter().enumerate() {
        let bound = 1u64 << (i + 1);
        if v % 2 == 0 || v >= bound {
            return Err(fail(format!(
                "initial value m_{} = {v} must be odd and below {bound}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Direction integers `m_1..m_cols` for one record, extending the initial
/// values by the standard recurrence
/// `m_l = 2 a_1 m_{l-1} (xor) ... (xor) 2^{s-1} a_{s-1} m_{l-s+1}
///        (xor) 2^s m_{l-s} (xor) m_{l-s}`.
fn direction_integers(record: &DirectionRecord, cols: u32) -> Vec<u64> {
    let s = record.degree as usize;
    let mut m = record.m.clone();
    m.truncate(cols as usize);
    while m.len() < cols as usize {
        let l = m.len();
        let mut next = (m[l - s] << s) ^ m[l - s];
        for k in 1..s {
            if (record.a >> (s - 1 - k)) & 1 == 1 {
                next ^= m[l - k] << k;
            }
        }
        m.push(next);
    }
    m
}

/// Builds `dims` Sobol' generating matrices of shape `rows x cols` in base
/// 2. Dimension 1 is the identity profile; later dimensions come from the
/// table.
pub fn sobol_matrices(
    table: &DirectionNumberTable,
    dims: u32,
    rows: u32,
    cols: u32,
) -> Result<Vec<GeneratingMatrix>> {
    if dims == 0 {
        return Err(Error::range("need at least one dimension"));
    }
    if dims > table.dimensions() {
        return Err(Error::config(format!(
            "{dims} dimensions requested but the table covers only {}",
            table.dimensions()
        )));
    }
    let mut out = Vec::with_capacity(dims as usize);
    for d in 1..=dims {
        let columns: Vec<u64> = if d == 1 {
            (1..=cols)
                .map(|l| if l <= rows { 1u64 << (rows - l) } else { 0 })
                .collect()
        } else {
            let record = table.record(d).expect("dimension bound checked");
            direction_integers(record, cols)
                .iter()
                .enumerate()
                .map(|(i, &m)| {
                    let l = i as u32 + 1;
                    if rows >= l {
                        m << (rows - l)
                    } else {
                        m >> (l - rows)
                    }
                })
                .collect()
        };
        out.push(GeneratingMatrix::from_packed_columns(rows, cols, columns)?);
    }
    Ok(out)
}
