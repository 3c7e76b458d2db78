//! Free lattices with optional symmetric bilinear and trilinear forms.
//!
//! Form entries are exact rationals and may be left unspecified: evaluating a
//! form never touches an unspecified entry unless the corresponding
//! coefficient product is nonzero, in which case it errors loudly instead of
//! inventing a value.

use crate::error::LatticeError;
use crate::matrix::{Int, Rat};
use num_traits::Zero;

/// Entry of a form: a known exact value, or deliberately unspecified.
pub type FormEntry = Option<Rat>;

/// Symmetric bilinear form on a rank-`n` lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearForm {
    rank: usize,
    entries: Vec<FormEntry>,
}

impl BilinearForm {
    /// Builds the form from a function of the *sorted* index pair, which makes
    /// symmetry hold by construction.
    pub fn from_sorted_fn(rank: usize, f: impl Fn(usize, usize) -> FormEntry) -> Self {
        let mut entries = Vec::with_capacity(rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                entries.push(f(a, b));
            }
        }
        Self { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> &FormEntry {
        &self.entries[i * self.rank + j]
    }

    pub fn evaluate(&self, x: &[Int], y: &[Int]) -> Result<Rat, LatticeError> {
        check_len(self.rank, x)?;
        check_len(self.rank, y)?;
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if y[j].is_zero() {
                    continue;
                }
                let entry = self.get(i, j).as_ref().ok_or(LatticeError::UnspecifiedFormEntry {
                    indices: vec![i, j],
                })?;
                acc += entry * Rat::from_integer(&x[i] * &y[j]);
            }
        }
        Ok(acc)
    }
}

/// Symmetric trilinear form (triple cup products) on a rank-`n` lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrilinearForm {
    rank: usize,
    entries: Vec<FormEntry>,
}

impl TrilinearForm {
    /// Builds the form from a function of the *sorted* index triple.
    pub fn from_sorted_fn(rank: usize, f: impl Fn(usize, usize, usize) -> FormEntry) -> Self {
        let mut entries = Vec::with_capacity(rank * rank * rank);
        for i in 0..rank {
            for j in 0..rank {
                for k in 0..rank {
                    let mut idx = [i, j, k];
                    idx.sort_unstable();
                    entries.push(f(idx[0], idx[1], idx[2]));
                }
            }
        }
        Self { rank, entries }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &FormEntry {
        &self.entries[(i * self.rank + j) * self.rank + k]
    }

    pub fn evaluate(&self, x: &[Int], y: &[Int], z: &[Int]) -> Result<Rat, LatticeError> {
        check_len(self.rank, x)?;
        check_len(self.rank, y)?;
        check_len(self.rank, z)?;
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.rank {
                if y[j].is_zero() {
                    continue;
                }
                for k in 0..self.rank {
                    if z[k].is_zero() {
                        continue;
                    }
                    let entry =
                        self.get(i, j, k)
                            .as_ref()
                            .ok_or(LatticeError::UnspecifiedFormEntry {
                                indices: vec![i, j, k],
                            })?;
                    acc += entry * Rat::from_integer(&x[i] * &y[j] * &z[k]);
                }
            }
        }
        Ok(acc)
    }
}

fn check_len(rank: usize, v: &[Int]) -> Result<(), LatticeError> {
    if v.len() != rank {
        return Err(LatticeError::DimensionMismatch {
            context: format!("coordinate vector length {} vs lattice rank {rank}", v.len()),
        });
    }
    Ok(())
}

/// A free lattice with labelled basis and optional forms.
#[derive(Debug, Clone)]
pub struct Lattice {
    basis_labels: Vec<String>,
    bilinear: Option<BilinearForm>,
    trilinear: Option<TrilinearForm>,
}

impl Lattice {
    pub fn new(basis_labels: Vec<String>) -> Self {
        Self {
            basis_labels,
            bilinear: None,
            trilinear: None,
        }
    }

    pub fn with_bilinear(mut self, form: BilinearForm) -> Result<Self, LatticeError> {
        if form.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                context: format!("bilinear form rank {} vs lattice rank {}", form.rank(), self.rank()),
            });
        }
        self.bilinear = Some(form);
        Ok(self)
    }

    pub fn with_trilinear(mut self, form: TrilinearForm) -> Result<Self, LatticeError> {
        if form.rank() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                context: format!("trilinear form rank {} vs lattice rank {}", form.rank(), self.rank()),
            });
        }
        self.trilinear = Some(form);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn bilinear(&self) -> Option<&BilinearForm> {
        self.bilinear.as_ref()
    }

    pub fn trilinear(&self) -> Option<&TrilinearForm> {
        self.trilinear.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{int, rat};

    #[test]
    fn trilinear_symmetry_by_construction() {
        let f = TrilinearForm::from_sorted_fn(3, |i, j, k| Some(rat((i + 2 * j + 4 * k) as i64, 1)));
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(f.get(i, j, k), f.get(k, i, j));
                    assert_eq!(f.get(i, j, k), f.get(j, i, k));
                }
            }
        }
    }

    #[test]
    fn unspecified_entry_errors_only_when_touched() {
        let f = BilinearForm::from_sorted_fn(2, |i, j| {
            if (i, j) == (1, 1) {
                None
            } else {
                Some(rat(1, 1))
            }
        });
        // zero coefficient on the unspecified slot: fine
        let ok = f.evaluate(&[int(3), int(0)], &[int(1), int(5)]).unwrap();
        assert_eq!(ok, rat(18, 1));
        // nonzero coefficient product touches the sentinel: loud error
        let err = f.evaluate(&[int(0), int(1)], &[int(0), int(1)]);
        assert!(matches!(err, Err(LatticeError::UnspecifiedFormEntry { .. })));
    }
}
