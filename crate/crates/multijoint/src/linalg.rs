//! Exact linear algebra over F_p and exact rational arithmetic.
//!
//! The incremental basis keeps a reduced echelon accumulator together with
//! an attribution tag per accepted row; the tableau builder reads the tilde-S
//! counts straight off those tags.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use num_bigint::BigInt;

/// Exact rational scalar used for weights and s-values.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_str(s: &str) -> Result<Rational> {
    let bad = || Error::MalformedRational(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Dense matrix over F_p with canonical entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFp {
    field: PrimeField,
    ncols: usize,
    rows: Vec<Vec<u64>>,
}

impl MatrixFp {
    pub fn new(field: PrimeField, ncols: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        for row in &rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
        }
        let p = field.modulus();
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v % p).collect())
            .collect();
        Ok(Self { field, ncols, rows })
    }

    pub fn zero(field: PrimeField, nrows: usize, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            rows: vec![vec![0; ncols]; nrows],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.rows[i][i] = 1 % field.modulus();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Reduced row-echelon form and rank. The echelon form is unique, so
    /// results are comparable by structural equality.
    pub fn rref(&self) -> (MatrixFp, usize) {
        let f = self.field;
        let mut rows = self.rows.clone();
        let mut pivot_row = 0usize;
        for col in 0..self.ncols {
            if pivot_row == rows.len() {
                break;
            }
            let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(pivot_row, r);
            let inv = f.inv(rows[pivot_row][col]).expect("pivot is nonzero");
            for v in rows[pivot_row].iter_mut() {
                *v = f.mul(*v, inv);
            }
            for r in 0..rows.len() {
                if r != pivot_row && rows[r][col] != 0 {
                    let factor = rows[r][col];
                    for c in 0..self.ncols {
                        let sub = f.mul(factor, rows[pivot_row][c]);
                        rows[r][c] = f.sub(rows[r][c], sub);
                    }
                }
            }
            pivot_row += 1;
        }
        let rank = pivot_row;
        rows.truncate(rank);
        rows.extend(std::iter::repeat(vec![0; self.ncols]).take(self.nrows() - rank));
        (
            MatrixFp {
                field: f,
                ncols: self.ncols,
                rows,
            },
            rank,
        )
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }
}

/// Rank-extending accumulator with per-row attribution tags.
#[derive(Debug, Clone)]
pub struct IncrementalBasis<T> {
    field: PrimeField,
    ncols: usize,
    // rows kept in reduced echelon form, sorted by pivot column
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    tags: Vec<T>,
}

impl<T: Clone> IncrementalBasis<T> {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        Self {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ncols
    }

    pub fn tags(&self) -> &[T] {
        &self.tags
    }

    /// Reduce `candidate` against the accumulator; if a nonzero residue
    /// remains the row is accepted, the accumulator re-reduced, and the tag
    /// recorded. Returns whether the candidate was accepted.
    pub fn try_extend(&mut self, candidate: &[u64], tag: T) -> Result<bool> {
        if candidate.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: candidate.len(),
            });
        }
        let f = self.field;
        let mut row: Vec<u64> = candidate.iter().map(|v| v % f.modulus()).collect();
        for (r, &piv) in self.pivots.iter().enumerate() {
            if row[piv] != 0 {
                let factor = row[piv];
                for c in 0..self.ncols {
                    let sub = f.mul(factor, self.rows[r][c]);
                    row[c] = f.sub(row[c], sub);
                }
            }
        }
        let Some(pivot) = row.iter().position(|&v| v != 0) else {
            return Ok(false);
        };
        let inv = f.inv(row[pivot]).expect("pivot is nonzero");
        for v in row.iter_mut() {
            *v = f.mul(*v, inv);
        }
        // back-substitute into existing rows to keep the reduced form
        for r in 0..self.rows.len() {
            if self.rows[r][pivot] != 0 {
                let factor = self.rows[r][pivot];
                for c in 0..self.ncols {
                    let sub = f.mul(factor, row[c]);
                    self.rows[r][c] = f.sub(self.rows[r][c], sub);
                }
            }
        }
        self.rows.push(row);
        self.pivots.push(pivot);
        self.tags.push(tag);
        Ok(true)
    }
}
