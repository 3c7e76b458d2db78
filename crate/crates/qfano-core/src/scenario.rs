//! Scenario data for a Q-Fano 3-fold with half-point singularities, and the
//! Weil-divisor coordinate/parity arithmetic on its blow-up.
//!
//! On the blow-up, a Weil class k*h with multiplicities q_i at the singular
//! points lies in the Picard lattice exactly when every q_i is congruent to k
//! mod 2; its coordinates in the basis {B0 = pull(h) - (1/2) sum e_i, e_i}
//! are (k; c_1, ..., c_N) with c_i = (k - q_i)/2.

use num_integer::Integer as _;
use num_traits::{Signed, Zero};

use crate::error::ModelError;
use crate::matrix::{Int, Rat};

/// The numeric inputs of one verification scenario.
///
/// `h3` is the self-intersection of the class-group generator (a rational
/// with `2*h3` integral and `h3 > 0`), `points` the number of half-point
/// singularities, `r` the odd positive integer with the canonical class
/// linearly equivalent to `-r*h`, and `mult_d` the multiplicities of the
/// distinguished anticanonical member at the singular points (default all 1;
/// parity is checked where the multiplicities are consumed, not here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFanoScenario {
    h3: Rat,
    points: usize,
    r: Int,
    mult_d: Vec<Int>,
}

impl QFanoScenario {
    pub fn new(h3: Rat, points: usize, r: i64) -> Result<Self, ModelError> {
        let mult_d = vec![Int::from(1); points];
        Self::with_mult_d(h3, points, Int::from(r), mult_d)
    }

    pub fn with_mult_d(h3: Rat, points: usize, r: Int, mult_d: Vec<Int>) -> Result<Self, ModelError> {
        if !h3.is_positive() {
            return Err(ModelError::CubeNotPositive { h3: h3.to_string() });
        }
        if !(&h3 + &h3).is_integer() {
            return Err(ModelError::CubeNotHalfIntegral { h3: h3.to_string() });
        }
        if !r.is_positive() {
            return Err(ModelError::NonPositiveAnticanonicalMultiple { r: r.to_string() });
        }
        if r.is_even() {
            return Err(ModelError::EvenAnticanonicalMultiple { r: r.to_string() });
        }
        if points == 0 {
            return Err(ModelError::NoSingularPoints);
        }
        if mult_d.len() != points {
            return Err(ModelError::MultiplicityCountMismatch {
                expected: points,
                got: mult_d.len(),
            });
        }
        if let Some(index) = mult_d.iter().position(Int::is_negative) {
            return Err(ModelError::NegativeMultiplicity { index });
        }
        Ok(Self { h3, points, r, mult_d })
    }

    pub fn h3(&self) -> &Rat {
        &self.h3
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn r(&self) -> &Int {
        &self.r
    }

    pub fn mult_d(&self) -> &[Int] {
        &self.mult_d
    }

    /// The distinguished anticanonical member as a Weil class: degree `r`
    /// with the scenario's multiplicities.
    pub fn anticanonical_class(&self) -> WeilClass {
        WeilClass {
            k: self.r.clone(),
            mult: self.mult_d.clone(),
        }
    }
}

/// A Weil divisor class `k*h` together with its multiplicities at the
/// singular points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilClass {
    k: Int,
    mult: Vec<Int>,
}

impl WeilClass {
    pub fn new(k: Int, mult: Vec<Int>) -> Result<Self, ModelError> {
        if let Some(index) = mult.iter().position(Int::is_negative) {
            return Err(ModelError::NegativeMultiplicity { index });
        }
        Ok(Self { k, mult })
    }

    pub fn k(&self) -> &Int {
        &self.k
    }

    pub fn mult(&self) -> &[Int] {
        &self.mult
    }

    /// Coordinates in the blow-up basis, or the first parity violation.
    pub fn blowup_coords(&self) -> Result<BlowupCoords, ModelError> {
        let two = Int::from(2);
        for (index, q) in self.mult.iter().enumerate() {
            if (&self.k - q).mod_floor(&two) != Int::zero() {
                return Err(ModelError::ParityViolation {
                    index,
                    k: self.k.to_string(),
                    q: q.to_string(),
                });
            }
        }
        let exceptional = self
            .mult
            .iter()
            .map(|q| (&self.k - q) / &two)
            .collect();
        Ok(BlowupCoords {
            k: self.k.clone(),
            exceptional,
        })
    }
}

/// Coordinates `(k; c_1, ..., c_N)` of a class in the blow-up Picard basis
/// `{B0, e_1, ..., e_N}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupCoords {
    pub k: Int,
    pub exceptional: Vec<Int>,
}

impl BlowupCoords {
    /// Full coordinate vector `(k, c_1, ..., c_N)`.
    pub fn as_vector(&self) -> Vec<Int> {
        let mut v = Vec::with_capacity(1 + self.exceptional.len());
        v.push(self.k.clone());
        v.extend(self.exceptional.iter().cloned());
        v
    }

    /// Expands `k*B0 + sum c_i e_i` back into the pullback presentation,
    /// returning `(k, q_1, ..., q_N)` with `q_i = k - 2 c_i`.
    pub fn pullback_presentation(&self) -> (Int, Vec<Int>) {
        let q = self
            .exceptional
            .iter()
            .map(|c| &self.k - Int::from(2) * c)
            .collect();
        (self.k.clone(), q)
    }
}

/// Coordinates of a Weil class in the blow-up basis; errors with the first
/// index at which the Cartier parity rule fails.
pub fn weil_to_blowup_coords(
    class: &WeilClass,
    scenario: &QFanoScenario,
) -> Result<BlowupCoords, ModelError> {
    if class.mult.len() != scenario.points() {
        return Err(ModelError::MultiplicityCountMismatch {
            expected: scenario.points(),
            got: class.mult.len(),
        });
    }
    class.blowup_coords()
}

/// Coordinates of the proper transform of the distinguished anticanonical
/// member; propagates the parity violation if any multiplicity is even.
pub fn anticanonical_transform_coords(scenario: &QFanoScenario) -> Result<BlowupCoords, ModelError> {
    scenario.anticanonical_class().blowup_coords()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{int, rat};

    fn weil(k: i64, q: &[i64]) -> WeilClass {
        WeilClass::new(int(k), q.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn scenario_validation() {
        assert!(QFanoScenario::new(rat(4, 1), 4, 1).is_ok());
        assert!(QFanoScenario::new(rat(1, 2), 3, 3).is_ok());
        assert!(matches!(
            QFanoScenario::new(rat(-1, 1), 4, 1),
            Err(ModelError::CubeNotPositive { .. })
        ));
        assert!(matches!(
            QFanoScenario::new(rat(0, 1), 4, 1),
            Err(ModelError::CubeNotPositive { .. })
        ));
        assert!(matches!(
            QFanoScenario::new(rat(1, 3), 4, 1),
            Err(ModelError::CubeNotHalfIntegral { .. })
        ));
        assert!(matches!(
            QFanoScenario::new(rat(4, 1), 4, 2),
            Err(ModelError::EvenAnticanonicalMultiple { .. })
        ));
        assert!(matches!(
            QFanoScenario::new(rat(4, 1), 0, 1),
            Err(ModelError::NoSingularPoints)
        ));
    }

    #[test]
    fn coords_examples() {
        let s = QFanoScenario::new(rat(4, 1), 4, 1).unwrap();
        let coords = weil_to_blowup_coords(&weil(1, &[1, 1, 1, 1]), &s).unwrap();
        assert_eq!(coords.k, int(1));
        assert_eq!(coords.exceptional, vec![int(0); 4]);

        let s2 = QFanoScenario::new(rat(4, 1), 2, 3).unwrap();
        let coords = weil_to_blowup_coords(&weil(3, &[1, 3]), &s2).unwrap();
        assert_eq!(coords.exceptional, vec![int(1), int(0)]);

        let err = weil_to_blowup_coords(&weil(2, &[1, 0]), &s2);
        assert!(matches!(err, Err(ModelError::ParityViolation { index: 0, .. })));
    }

    #[test]
    fn anticanonical_coords() {
        let s = QFanoScenario::new(rat(4, 1), 4, 1).unwrap();
        let coords = anticanonical_transform_coords(&s).unwrap();
        assert_eq!(coords.as_vector(), vec![int(1), int(0), int(0), int(0), int(0)]);

        let s = QFanoScenario::with_mult_d(rat(4, 1), 2, int(3), vec![int(1), int(1)]).unwrap();
        let coords = anticanonical_transform_coords(&s).unwrap();
        assert_eq!(coords.as_vector(), vec![int(3), int(1), int(1)]);

        let s = QFanoScenario::with_mult_d(rat(4, 1), 1, int(1), vec![int(2)]).unwrap();
        assert!(matches!(
            anticanonical_transform_coords(&s),
            Err(ModelError::ParityViolation { index: 0, .. })
        ));
    }

    #[test]
    fn pullback_round_trip() {
        let class = weil(5, &[1, 3, 5]);
        let coords = class.blowup_coords().unwrap();
        let (k, q) = coords.pullback_presentation();
        assert_eq!(k, int(5));
        assert_eq!(q, vec![int(1), int(3), int(5)]);
    }
}
