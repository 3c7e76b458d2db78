//! The smoothing-lattice certificate: cup products on compatibility classes
//! with mixed terms set to zero, the unimodular pairing matrix, and the
//! induced degree-2 lattice of the smooth fiber.
//!
//! The Hodge-theoretic inputs (h^{2,0} = 0 on the smooth fibers and the
//! expected rank k) are premises carried into the certificate, never
//! computed: the engine certifies the arithmetic, and labels what it assumes.

use num_traits::Zero;

use crate::error::SmoothingError;
use crate::fiber::{Degree, GlobalClass, NormalCrossingFiber};
use crate::matrix::{ExactMatrix, Int, Rat};

/// The dimension of the fibers modelled by this crate. Degree pairs other
/// than (2, n-2) = (2, 4) are unrepresentable; a future generalization must
/// change this constant and the `Degree` enum together.
pub const FIBER_DIMENSION: usize = 3;

fn expect_degree(class: &GlobalClass, expected: Degree) -> Result<(), SmoothingError> {
    if class.degree != expected {
        return Err(SmoothingError::DegreeMismatch {
            expected: expected.value(),
            got: class.degree.value(),
        });
    }
    Ok(())
}

/// Cup pairing of a degree-2 class against a degree-4 class: the sum over
/// components of the component pairings, with no cross-component terms.
pub fn mixed_zero_pairing(
    a: &GlobalClass,
    b: &GlobalClass,
    fiber: &NormalCrossingFiber,
) -> Result<Int, SmoothingError> {
    expect_degree(a, Degree::Two)?;
    expect_degree(b, Degree::Four)?;
    check_shape(a, fiber)?;
    check_shape(b, fiber)?;
    let mut acc = Rat::zero();
    for (idx, component) in fiber.components().iter().enumerate() {
        let x = &a.per_component[idx];
        let y = &b.per_component[idx];
        let pairing = component.pairing();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc += pairing.at(i, j) * Rat::from_integer(xi * yj);
            }
        }
    }
    debug_assert!(acc.is_integer(), "component pairings are integral");
    Ok(acc.to_integer())
}

/// Triple cup product of three degree-2 classes, mixed terms zero: the sum of
/// the per-component trilinear forms.
pub fn mixed_zero_triple(
    a: &GlobalClass,
    b: &GlobalClass,
    c: &GlobalClass,
    fiber: &NormalCrossingFiber,
) -> Result<Rat, SmoothingError> {
    for class in [a, b, c] {
        expect_degree(class, Degree::Two)?;
        check_shape(class, fiber)?;
    }
    let mut acc = Rat::zero();
    for (idx, component) in fiber.components().iter().enumerate() {
        let form = component
            .h2()
            .trilinear()
            .ok_or_else(|| SmoothingError::MissingTripleProducts {
                component: component.name().to_string(),
            })?;
        acc += form
            .evaluate(
                &a.per_component[idx],
                &b.per_component[idx],
                &c.per_component[idx],
            )
            .map_err(|e| SmoothingError::NonIntegralCupProduct {
                indices: vec![idx],
                value: e.to_string(),
            })?;
    }
    Ok(acc)
}

fn check_shape(class: &GlobalClass, fiber: &NormalCrossingFiber) -> Result<(), SmoothingError> {
    let ranks = fiber.block_ranks(class.degree);
    if class.per_component.len() != ranks.len()
        || class
            .per_component
            .iter()
            .zip(&ranks)
            .any(|(block, &r)| block.len() != r)
    {
        return Err(SmoothingError::ShapeMismatch {
            context: format!(
                "degree-{} class with {} blocks on a fiber with {} components",
                class.degree,
                class.per_component.len(),
                ranks.len()
            ),
        });
    }
    Ok(())
}

/// Premises carried by a certificate rather than computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificatePremises {
    /// h^{2,0} of the smooth fibers vanishes (granted as input).
    pub h20_zero: bool,
}

/// The pairing matrix of k degree-2 classes against k degree-4 classes,
/// together with the exact unimodularity verdict. `admissible` records
/// whether the Hodge premise was granted; an inadmissible certificate is
/// issued but marked, never silently treated as proof.
#[derive(Debug, Clone)]
pub struct PairingCertificate {
    pub a_classes: Vec<GlobalClass>,
    pub b_classes: Vec<GlobalClass>,
    pub matrix: ExactMatrix,
    pub unimodular: bool,
    pub k: usize,
    pub admissible: bool,
}

/// Builds the full pairing matrix and decides unimodularity by exact
/// determinant.
pub fn certify(
    a_classes: &[GlobalClass],
    b_classes: &[GlobalClass],
    fiber: &NormalCrossingFiber,
    k: usize,
    premises: CertificatePremises,
) -> Result<PairingCertificate, SmoothingError> {
    if a_classes.len() != k || b_classes.len() != k || k == 0 {
        return Err(SmoothingError::SizeMismatch {
            k,
            a_len: a_classes.len(),
            b_len: b_classes.len(),
        });
    }
    let mut rows = Vec::with_capacity(k);
    for a in a_classes {
        let mut row = Vec::with_capacity(k);
        for b in b_classes {
            row.push(Rat::from_integer(mixed_zero_pairing(a, b, fiber)?));
        }
        rows.push(row);
    }
    let matrix = ExactMatrix::from_rows(rows).expect("k x k by construction");
    let det = matrix.determinant().expect("square by construction");
    Ok(PairingCertificate {
        a_classes: a_classes.to_vec(),
        b_classes: b_classes.to_vec(),
        matrix,
        unimodular: ExactMatrix::abs_is_one(&det),
        k,
        admissible: premises.h20_zero,
    })
}

/// The degree-2 lattice of the smooth fiber, carried by the a-classes of a
/// unimodular certificate, with the cup product preserved.
#[derive(Debug, Clone)]
pub struct SmoothFiberLattice {
    pub rank: usize,
    /// Row-major k^3 array of triple cup products; integral by construction.
    pub cup_product: Vec<Int>,
    /// The certificate this lattice was extracted from.
    pub certificate: PairingCertificate,
}

impl SmoothFiberLattice {
    pub fn cup(&self, i: usize, j: usize, l: usize) -> &Int {
        &self.cup_product[(i * self.rank + j) * self.rank + l]
    }

    /// For rank one, the cube of the generator.
    pub fn generator_cube(&self) -> &Int {
        self.cup(0, 0, 0)
    }
}

/// Extracts the smooth-fiber lattice from a unimodular, admissible
/// certificate; refuses anything weaker.
pub fn induced_cup_product(
    cert: &PairingCertificate,
    fiber: &NormalCrossingFiber,
) -> Result<SmoothFiberLattice, SmoothingError> {
    if !cert.admissible {
        return Err(SmoothingError::Inadmissible);
    }
    if !cert.unimodular {
        return Err(SmoothingError::NotUnimodular);
    }
    let k = cert.k;
    let mut cup_product = Vec::with_capacity(k * k * k);
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let value = mixed_zero_triple(
                    &cert.a_classes[i],
                    &cert.a_classes[j],
                    &cert.a_classes[l],
                    fiber,
                )?;
                if !value.is_integer() {
                    return Err(SmoothingError::NonIntegralCupProduct {
                        indices: vec![i, j, l],
                        value: value.to_string(),
                    });
                }
                cup_product.push(value.to_integer());
            }
        }
    }
    Ok(SmoothFiberLattice {
        rank: k,
        cup_product,
        certificate: cert.clone(),
    })
}
