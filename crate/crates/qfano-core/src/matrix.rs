//! Dense matrices with exact rational entries. Everything downstream (normal
//! forms, kernels, pairings) is built on this type; no floating point exists
//! anywhere in the crate.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LatticeError;

/// Arbitrary-precision integer used throughout the crate.
pub type Int = BigInt;
/// Arbitrary-precision rational used throughout the crate.
pub type Rat = BigRational;

/// Convenience constructor for an exact integer.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Convenience constructor for an exact rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self, LatticeError> {
        if entries.len() != rows * cols {
            return Err(LatticeError::BadEntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, LatticeError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(LatticeError::DimensionMismatch {
                    context: format!("row {i} has {} entries, expected {ncols}", row.len()),
                });
            }
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: Vec<Vec<Int>>) -> Result<Self, LatticeError> {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Rat::from_integer).collect())
                .collect(),
        )
    }

    /// Test/CLI convenience: build an integral matrix from machine integers.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rat::from_integer(int(v))).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { Rat::one() } else { Rat::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(Rat::is_integer)
    }

    /// Integer view of an integral matrix; reports the first offending entry
    /// otherwise.
    pub fn to_int_rows(&self) -> Result<Vec<Vec<Int>>, LatticeError> {
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for c in 0..self.cols {
                let e = self.at(r, c);
                if !e.is_integer() {
                    return Err(LatticeError::NonIntegralMatrix { row: r, col: c });
                }
                row.push(e.to_integer());
            }
            out.push(row);
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, LatticeError> {
        if self.cols != rhs.rows {
            return Err(LatticeError::DimensionMismatch {
                context: format!(
                    "cannot multiply {}x{} by {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |r, c| {
            let mut acc = Rat::zero();
            for k in 0..self.cols {
                if !self.at(r, k).is_zero() && !rhs.at(k, c).is_zero() {
                    acc += self.at(r, k) * rhs.at(k, c);
                }
            }
            acc
        }))
    }

    pub fn mul_int_vec(&self, v: &[Int]) -> Result<Vec<Int>, LatticeError> {
        if v.len() != self.cols {
            return Err(LatticeError::DimensionMismatch {
                context: format!("vector length {} vs {} columns", v.len(), self.cols),
            });
        }
        let rows = self.to_int_rows()?;
        Ok(rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * factor)
    }

    /// Exact determinant by rational Gaussian elimination.
    pub fn determinant(&self) -> Result<Rat, LatticeError> {
        if !self.is_square() {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rat::one());
        }
        let mut m: Vec<Vec<Rat>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut det = Rat::one();
        for k in 0..n {
            let pivot_row = match (k..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => i,
                None => return Ok(Rat::zero()),
            };
            if pivot_row != k {
                m.swap(pivot_row, k);
                det = -det;
            }
            let pivot = m[k][k].clone();
            det *= &pivot;
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let factor = &m[i][k] / &pivot;
                for j in k..n {
                    let delta = &factor * &m[k][j];
                    m[i][j] -= delta;
                }
            }
        }
        Ok(det)
    }

    /// Column rank, computed exactly over the rationals.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rat>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = (rank..self.rows).find(|&i| !m[i][col].is_zero());
            let Some(pivot) = pivot else { continue };
            m.swap(rank, pivot);
            let lead = m[rank][col].clone();
            for i in rank + 1..self.rows {
                if m[i][col].is_zero() {
                    continue;
                }
                let factor = &m[i][col] / &lead;
                for j in col..self.cols {
                    let delta = &factor * &m[rank][j];
                    m[i][j] -= delta;
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    /// Vertically stack matrices with equal column counts.
    pub fn vstack(blocks: &[ExactMatrix]) -> Result<Self, LatticeError> {
        let cols = blocks.first().map_or(0, ExactMatrix::cols);
        let mut rows = Vec::new();
        for b in blocks {
            if b.cols() != cols {
                return Err(LatticeError::DimensionMismatch {
                    context: format!("vstack blocks with {} and {cols} columns", b.cols()),
                });
            }
            for r in 0..b.rows() {
                rows.push(b.row(r).to_vec());
            }
        }
        let nrows = rows.len();
        Ok(Self {
            rows: nrows,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn abs_is_one(v: &Rat) -> bool {
        v.abs().is_one()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small_cases() {
        assert_eq!(
            ExactMatrix::from_i64_rows(&[&[1]]).determinant().unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            ExactMatrix::from_i64_rows(&[&[2, 4], &[6, 8]])
                .determinant()
                .unwrap(),
            rat(-8, 1)
        );
        // cofactor expansion: det [[0,1],[1,d]] = -1 for every d
        for d in -5..=5 {
            assert_eq!(
                ExactMatrix::from_i64_rows(&[&[0, 1], &[1, d]])
                    .determinant()
                    .unwrap(),
                rat(-1, 1)
            );
        }
    }

    #[test]
    fn determinant_rejects_non_square() {
        let m = ExactMatrix::from_i64_rows(&[&[1, 2, 3]]);
        assert!(matches!(
            m.determinant(),
            Err(LatticeError::NotSquare { rows: 1, cols: 3 })
        ));
    }

    #[test]
    fn integrality_flag() {
        let mut m = ExactMatrix::identity(2);
        assert!(m.is_integral());
        m.set(0, 1, rat(1, 2));
        assert!(!m.is_integral());
        assert!(matches!(
            m.to_int_rows(),
            Err(LatticeError::NonIntegralMatrix { row: 0, col: 1 })
        ));
    }

    #[test]
    fn rank_of_rectangular() {
        let m = ExactMatrix::from_i64_rows(&[&[2, -2, 0], &[0, 1, -1]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(ExactMatrix::zeros(2, 3).rank(), 0);
    }
}
