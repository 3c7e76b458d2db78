//! Smith normal form over the integers, with the unimodular transforms kept,
//! plus the lattice predicates built on it: saturated integer kernels,
//! injectivity/primitivity of lattice maps, unimodularity, and exact integer
//! linear solving.
//!
//! The decomposition satisfies `U * A * V = S` with `|det U| = |det V| = 1`,
//! a nonnegative diagonal `S`, and each diagonal entry dividing the next
//! (zeros trailing). Entries are arbitrary-precision integers; intermediate
//! values can exceed machine words even for small inputs.

use num_traits::{Signed, Zero};

use crate::error::LatticeError;
use crate::matrix::{ExactMatrix, Int, Rat};

/// Smith decomposition `U * A * V = S` of an integral matrix `A`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: ExactMatrix,
    pub s: ExactMatrix,
    pub v: ExactMatrix,
    /// The decomposed matrix.
    pub source: ExactMatrix,
}

impl SmithDecomposition {
    /// The full diagonal of `S`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.at(i, i).to_integer()).collect()
    }

    /// The nonzero elementary divisors, in their divisibility chain order.
    pub fn elementary_divisors(&self) -> Vec<Int> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }

    /// Re-checks every structural invariant of the decomposition. Used by the
    /// property suites; cheap at desk scale.
    pub fn verify(&self) -> Result<(), LatticeError> {
        let product = self.u.mul(&self.source)?.mul(&self.v)?;
        if product != self.s {
            return Err(LatticeError::Internal("U*A*V != S".into()));
        }
        for (name, m) in [("U", &self.u), ("V", &self.v)] {
            if !ExactMatrix::abs_is_one(&m.determinant()?) {
                return Err(LatticeError::Internal(format!("|det {name}| != 1")));
            }
        }
        for r in 0..self.s.rows() {
            for c in 0..self.s.cols() {
                let e = self.s.at(r, c);
                if r != c && !e.is_zero() {
                    return Err(LatticeError::Internal("S is not diagonal".into()));
                }
                if r == c && e.is_negative() {
                    return Err(LatticeError::Internal("S has a negative entry".into()));
                }
            }
        }
        let diag = self.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() && !w[1].is_zero() {
                return Err(LatticeError::Internal("zero divisor before a nonzero one".into()));
            }
            if !w[0].is_zero() && !w[1].is_zero() && !(&w[1] % &w[0]).is_zero() {
                return Err(LatticeError::Internal(format!(
                    "divisor chain broken: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }
}

/// Working state: `s` is reduced in place while `u` and `v` accumulate the
/// row and column operations.
struct Reduction {
    m: usize,
    n: usize,
    s: Vec<Vec<Int>>,
    u: Vec<Vec<Int>>,
    v: Vec<Vec<Int>>,
}

impl Reduction {
    fn new(a: Vec<Vec<Int>>, m: usize, n: usize) -> Self {
        let ident = |k: usize| -> Vec<Vec<Int>> {
            (0..k)
                .map(|i| (0..k).map(|j| Int::from(u8::from(i == j))).collect())
                .collect()
        };
        Self {
            m,
            n,
            s: a,
            u: ident(m),
            v: ident(n),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.s.swap(a, b);
            self.u.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for row in &mut self.s {
                row.swap(a, b);
            }
            for row in &mut self.v {
                row.swap(a, b);
            }
        }
    }

    /// row[target] -= q * row[source]
    fn row_sub(&mut self, target: usize, source: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.n {
            let delta = q * &self.s[source][j];
            self.s[target][j] -= delta;
        }
        for j in 0..self.m {
            let delta = q * &self.u[source][j];
            self.u[target][j] -= delta;
        }
    }

    /// col[target] -= q * col[source]
    fn col_sub(&mut self, target: usize, source: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for row in &mut self.s {
            let delta = q * &row[source];
            row[target] -= delta;
        }
        for row in &mut self.v {
            let delta = q * &row[source];
            row[target] -= delta;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for e in &mut self.s[r] {
            *e = -std::mem::take(e);
        }
        for e in &mut self.u[r] {
            *e = -std::mem::take(e);
        }
    }

    /// Smallest-magnitude nonzero entry of the trailing submatrix.
    fn min_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            for j in t..self.n {
                if self.s[i][j].is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.s[bi][bj].abs() <= self.s[i][j].abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn reduce(&mut self) {
        let mut t = 0;
        while t < self.m && t < self.n {
            let Some((pi, pj)) = self.min_nonzero(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            'pivot: loop {
                // Clear the pivot column with Euclidean steps; a nonzero
                // remainder is strictly smaller than the pivot and becomes
                // the new pivot.
                for i in t + 1..self.m {
                    if self.s[i][t].is_zero() {
                        continue;
                    }
                    let q = &self.s[i][t] / &self.s[t][t];
                    self.row_sub(i, t, &q);
                    if !self.s[i][t].is_zero() {
                        self.swap_rows(t, i);
                        continue 'pivot;
                    }
                }
                for j in t + 1..self.n {
                    if self.s[t][j].is_zero() {
                        continue;
                    }
                    let q = &self.s[t][j] / &self.s[t][t];
                    self.col_sub(j, t, &q);
                    if !self.s[t][j].is_zero() {
                        self.swap_cols(t, j);
                        continue 'pivot;
                    }
                }
                // Pivot row and column are clear. Enforce divisibility of the
                // remaining block by folding an offending row into the pivot
                // row; the pivot gcd strictly shrinks, so this terminates.
                for i in t + 1..self.m {
                    for j in t + 1..self.n {
                        if !(&self.s[i][j] % &self.s[t][t]).is_zero() {
                            let one = Int::from(-1);
                            self.row_sub(t, i, &one);
                            continue 'pivot;
                        }
                    }
                }
                break;
            }
            if self.s[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

fn int_matrix(rows: Vec<Vec<Int>>, nrows: usize, ncols: usize) -> ExactMatrix {
    debug_assert_eq!(rows.len(), nrows);
    ExactMatrix::from_rows(
        rows.into_iter()
            .map(|r| {
                debug_assert_eq!(r.len(), ncols);
                r.into_iter().map(Rat::from_integer).collect()
            })
            .collect(),
    )
    .expect("rectangular by construction")
}

/// Smith normal form of an integral matrix. Rejects non-integral input.
pub fn smith_normal_form(a: &ExactMatrix) -> Result<SmithDecomposition, LatticeError> {
    let int_rows = a.to_int_rows()?;
    let (m, n) = (a.rows(), a.cols());
    let mut red = Reduction::new(int_rows, m, n);
    red.reduce();
    Ok(SmithDecomposition {
        u: int_matrix(red.u, m, m),
        s: int_matrix(red.s, m, n),
        v: int_matrix(red.v, n, n),
        source: a.clone(),
    })
}

/// Basis of the integer kernel of `A`, as matrix columns.
///
/// The basis is saturated: every integer solution of `A x = 0` is an integer
/// combination of the returned columns. Columns are normalized so their first
/// nonzero entry is positive.
pub fn integer_kernel_basis(a: &ExactMatrix) -> Result<ExactMatrix, LatticeError> {
    let snf = smith_normal_form(a)?;
    let rank = snf.rank();
    let n = a.cols();
    // A = U^-1 S V^-1, so A x = 0 iff S (V^-1 x) = 0: the kernel is spanned by
    // the columns of V past the rank, and V unimodular makes the span saturated.
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for j in rank..n {
        let mut col = snf.v.col(j);
        if let Some(first) = col.iter().find(|e| !e.is_zero()) {
            if first.is_negative() {
                col = col.into_iter().map(|e| -e).collect();
            }
        }
        cols.push(col);
    }
    Ok(ExactMatrix::from_fn(n, cols.len(), |r, c| cols[c][r].clone()))
}

/// Verdict of `is_injective_primitive`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeMapReport {
    pub injective: bool,
    pub primitive: bool,
    pub elementary_divisors: Vec<Int>,
}

/// Interprets an integral matrix as a map of free lattices and decides
/// injectivity and primitivity (torsion-free cokernel).
pub fn is_injective_primitive(a: &ExactMatrix) -> Result<LatticeMapReport, LatticeError> {
    let snf = smith_normal_form(a)?;
    let divisors = snf.elementary_divisors();
    let injective = divisors.len() == a.cols();
    let primitive = injective && divisors.iter().all(|d| *d == Int::from(1));
    Ok(LatticeMapReport {
        injective,
        primitive,
        elementary_divisors: divisors,
    })
}

/// True iff the square integral matrix has determinant of absolute value one.
pub fn is_unimodular(m: &ExactMatrix) -> Result<bool, LatticeError> {
    if !m.is_square() {
        return Err(LatticeError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let _ = m.to_int_rows()?;
    Ok(ExactMatrix::abs_is_one(&m.determinant()?))
}

/// Solves `A x = b` over the integers, if an integer solution exists.
pub fn solve_integer(a: &ExactMatrix, b: &[Int]) -> Result<Option<Vec<Int>>, LatticeError> {
    if b.len() != a.rows() {
        return Err(LatticeError::DimensionMismatch {
            context: format!("rhs length {} vs {} rows", b.len(), a.rows()),
        });
    }
    let snf = smith_normal_form(a)?;
    let c = snf.u.mul_int_vec(b)?;
    let diag = snf.diagonal();
    let rank = snf.rank();
    let mut y = vec![Int::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < rank {
            if !(ci % &diag[i]).is_zero() {
                return Ok(None);
            }
            y[i] = ci / &diag[i];
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(snf.v.mul_int_vec(&y)?))
}
