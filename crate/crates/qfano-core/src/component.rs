//! Cohomology models of the central-fiber pieces.
//!
//! Each component carries its degree-2 lattice with triple cup products, its
//! degree-4 lattice, the degree-2 x degree-4 cup pairing, and restriction
//! data to the boundary surfaces along which it is glued. The two blow-up
//! components share the blow-up intersection numbers of a half-point: the
//! exceptional plane restricts to itself with degree -2, so its cube is 4.

use num_traits::{One, Zero};

use crate::error::{LatticeError, ModelError};
use crate::lattice::{BilinearForm, Lattice, TrilinearForm};
use crate::matrix::{ExactMatrix, Int, Rat};
use crate::scenario::{anticanonical_transform_coords, QFanoScenario};

/// A double-locus surface: its degree-2 lattice and the cohomology vanishing
/// hypothesis that gates every compatibility-kernel computation through it.
/// The degree-4 group of every surface in scope is the integers, so degree-4
/// restrictions are single intersection numbers.
#[derive(Debug, Clone)]
pub struct SurfaceModel {
    pub name: String,
    pub h2: Lattice,
    /// Records the vanishing hypothesis on the cohomology below the working
    /// degrees. This is data supplied with the model, not something computed.
    pub h1_is_zero: bool,
}

/// Restriction data from one component to one of its boundary surfaces.
#[derive(Debug, Clone)]
pub struct BoundaryRestriction {
    pub surface: String,
    /// Degree-2 restriction: surface-rank x component-rank integral matrix.
    pub restriction2: ExactMatrix,
    /// Degree-4 restriction: intersection number of each degree-4 basis class
    /// with the surface.
    pub restriction4: Vec<Int>,
}

/// One component of the central fiber.
#[derive(Debug, Clone)]
pub struct ComponentModel {
    name: String,
    h2: Lattice,
    h4: Lattice,
    pairing: ExactMatrix,
    boundary: Vec<BoundaryRestriction>,
}

impl ComponentModel {
    pub fn new(
        name: impl Into<String>,
        h2: Lattice,
        h4: Lattice,
        pairing: ExactMatrix,
        boundary: Vec<BoundaryRestriction>,
    ) -> Result<Self, LatticeError> {
        let name = name.into();
        if pairing.rows() != h2.rank() || pairing.cols() != h4.rank() {
            return Err(LatticeError::DimensionMismatch {
                context: format!(
                    "component {name}: pairing is {}x{}, expected {}x{}",
                    pairing.rows(),
                    pairing.cols(),
                    h2.rank(),
                    h4.rank()
                ),
            });
        }
        let _ = pairing.to_int_rows()?;
        for b in &boundary {
            if b.restriction2.cols() != h2.rank() {
                return Err(LatticeError::DimensionMismatch {
                    context: format!(
                        "component {name}, boundary {}: degree-2 restriction has {} columns, expected {}",
                        b.surface,
                        b.restriction2.cols(),
                        h2.rank()
                    ),
                });
            }
            let _ = b.restriction2.to_int_rows()?;
            if b.restriction4.len() != h4.rank() {
                return Err(LatticeError::DimensionMismatch {
                    context: format!(
                        "component {name}, boundary {}: degree-4 restriction has {} entries, expected {}",
                        b.surface,
                        b.restriction4.len(),
                        h4.rank()
                    ),
                });
            }
        }
        Ok(Self {
            name,
            h2,
            h4,
            pairing,
            boundary,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn h2(&self) -> &Lattice {
        &self.h2
    }

    pub fn h4(&self) -> &Lattice {
        &self.h4
    }

    pub fn pairing(&self) -> &ExactMatrix {
        &self.pairing
    }

    pub fn boundary(&self) -> &[BoundaryRestriction] {
        &self.boundary
    }

    pub fn boundary_index(&self, surface: &str) -> Option<usize> {
        self.boundary.iter().position(|b| b.surface == surface)
    }
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

/// Trilinear form shared by the two point-blow-up components, on the basis
/// {B0, e_1, ..., e_N} (respectively {M0, f_1, ..., f_N}):
/// B0^3 = h^3 - N/2, B0^2 e_i = 1, B0 e_i^2 = -2, e_i^3 = 4, and every
/// product with two distinct exceptional indices vanishes.
fn blowup_triple_products(h3: &Rat, n: usize) -> impl Fn(usize, usize, usize) -> Option<Rat> + '_ {
    move |i, j, k| {
        let cube = h3 - Rat::new(Int::from(n), Int::from(2));
        Some(match (i, j, k) {
            (0, 0, 0) => cube,
            (0, 0, _) => Rat::one(),
            (0, a, b) if a == b => -Rat::from_integer(Int::from(2)),
            (a, b, c) if a == b && b == c => Rat::from_integer(Int::from(4)),
            _ => Rat::zero(),
        })
    }
}

/// The first blow-up component: the blow-up of the Q-Fano at its singular
/// points, with Picard basis {B0 = pull(h) - (1/2) sum e_i, e_1, ..., e_N}
/// and degree-4 basis dual to it (identity pairing).
pub fn build_v1(s: &QFanoScenario) -> Result<ComponentModel, ModelError> {
    let n = s.points();
    let rank = n + 1;
    let transform = anticanonical_transform_coords(s)?;

    let mut h2_labels = vec!["B0".to_string()];
    h2_labels.extend(labels("e", n));
    let h2 = Lattice::new(h2_labels)
        .with_trilinear(TrilinearForm::from_sorted_fn(rank, blowup_triple_products(s.h3(), n)))
        .expect("rank matches");

    let mut h4_labels = vec!["m0".to_string()];
    h4_labels.extend(labels("m", n));
    let h4 = Lattice::new(h4_labels);

    let pairing = ExactMatrix::identity(rank);

    let mut boundary = Vec::with_capacity(n + 1);
    // Proper transform of the anticanonical member: B0 and e_i restrict to
    // the corresponding classes of the shared surface basis; nothing on this
    // side hits the curve-class slot. The degree-4 restriction row is the
    // coordinate vector of the transform, read off through the dual pairing.
    let k3_rank = n + 2;
    let restriction2 = ExactMatrix::from_fn(k3_rank, rank, |r, c| {
        if r == c && r < rank {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    boundary.push(BoundaryRestriction {
        surface: "Dtilde".to_string(),
        restriction2,
        restriction4: transform.as_vector(),
    });
    for i in 1..=n {
        // On the i-th exceptional plane: B0 restricts to the line class,
        // e_i to -2 lines, other exceptional classes to zero.
        let restriction2 = ExactMatrix::from_fn(1, rank, |_, c| {
            if c == 0 {
                Rat::one()
            } else if c == i {
                -Rat::from_integer(Int::from(2))
            } else {
                Rat::zero()
            }
        });
        let restriction4 = (0..rank).map(|j| Int::from(u8::from(j == i))).collect();
        boundary.push(BoundaryRestriction {
            surface: format!("e{i}"),
            restriction2,
            restriction4,
        });
    }

    Ok(ComponentModel::new("V1", h2, h4, pairing, boundary).expect("dimensions consistent"))
}

/// The second blow-up component: blow-up at the singular points and along the
/// curve cut out by the branch surface on the anticanonical member. Basis
/// {M0, f_1, ..., f_N, gC} where gC is the exceptional surface over the
/// curve; its multi-fold self-products are deliberately unspecified and its
/// cup pairings against the modelled degree-4 classes are zero. The degree-4
/// model carries the fiber class F of the curve blow-up, with F restricting
/// to the transform with degree 1 and to the exceptional planes with 0.
pub fn build_v2(s: &QFanoScenario) -> Result<ComponentModel, ModelError> {
    let n = s.points();
    let rank = n + 2;
    // Validates the same parity data as the first component.
    let _ = anticanonical_transform_coords(s)?;

    let mut h2_labels = vec!["M0".to_string()];
    h2_labels.extend(labels("f", n));
    h2_labels.push("gC".to_string());
    let point_part = blowup_triple_products(s.h3(), n);
    let curve_index = n + 1;
    let h2 = Lattice::new(h2_labels)
        .with_trilinear(TrilinearForm::from_sorted_fn(rank, move |i, j, k| {
            let touches = [i, j, k].iter().filter(|&&x| x == curve_index).count();
            match touches {
                0 => point_part(i, j, k),
                // A single factor over the curve: zero by projection to the
                // base and disjointness from the exceptional planes.
                1 => Some(Rat::zero()),
                _ => None,
            }
        }))
        .expect("rank matches");

    let h4 = Lattice::new(vec!["F".to_string()]);
    let pairing = ExactMatrix::zeros(rank, 1);

    let mut boundary = Vec::with_capacity(n + 1);
    let k3_rank = n + 2;
    let restriction2 = ExactMatrix::from_fn(k3_rank, rank, |r, c| {
        if r == c {
            Rat::one()
        } else {
            Rat::zero()
        }
    });
    boundary.push(BoundaryRestriction {
        surface: "Dtilde".to_string(),
        restriction2,
        restriction4: vec![Int::one()],
    });
    for i in 1..=n {
        let restriction2 = ExactMatrix::from_fn(1, rank, |_, c| {
            if c == 0 {
                Rat::one()
            } else if c == i {
                -Rat::from_integer(Int::from(2))
            } else {
                Rat::zero()
            }
        });
        boundary.push(BoundaryRestriction {
            surface: format!("f{i}"),
            restriction2,
            restriction4: vec![Int::zero()],
        });
    }

    Ok(ComponentModel::new("V2", h2, h4, pairing, boundary).expect("dimensions consistent"))
}

/// The i-th projective 3-space component, glued along two disjoint planes.
/// Degree 2 is generated by the hyperplane class (cube 1), degree 4 by the
/// line class, with pairing 1; both planes receive the line class of their
/// own plane geometry.
pub fn build_e(i: usize) -> ComponentModel {
    let h2 = Lattice::new(vec!["eta".to_string()])
        .with_trilinear(TrilinearForm::from_sorted_fn(1, |_, _, _| Some(Rat::one())))
        .expect("rank matches");
    let h4 = Lattice::new(vec!["lambda".to_string()]);
    let pairing = ExactMatrix::identity(1);
    let plane = |surface: String| BoundaryRestriction {
        surface,
        restriction2: ExactMatrix::identity(1),
        restriction4: vec![Int::one()],
    };
    let boundary = vec![plane(format!("e{i}")), plane(format!("f{i}"))];
    ComponentModel::new(format!("E{i}"), h2, h4, pairing, boundary).expect("dimensions consistent")
}

/// The shared surface model of the two blow-up transforms: a K3 with the
/// classes actually exercised by the gluing. Basis: the restriction of the
/// corrected pullback (hD), the exceptional curves over the singular points
/// of the member (c_i), and the class of the branch curve (cS), which only
/// the second component hits. Unrecorded products against cS stay
/// unspecified rather than invented; the curve misses the singular points,
/// so its products with the c_i are zero.
pub fn k3_double_locus(s: &QFanoScenario) -> Result<SurfaceModel, ModelError> {
    let n = s.points();
    let rank = n + 2;
    let transform = anticanonical_transform_coords(s)?;
    let r = s.r().clone();
    let q = s.mult_d().to_vec();
    let c = transform.exceptional.clone();

    // hD^2 = r (h^3 - N/2) + sum c_i, hD.c_i = q_i, c_i^2 = -2 q_i, all
    // computed from the ambient triple products against the transform.
    let h3 = s.h3().clone();
    let curve_index = n + 1;
    let bilinear = BilinearForm::from_sorted_fn(rank, move |i, j| {
        if i == 0 && j == 0 {
            let mut v = Rat::from_integer(r.clone())
                * (&h3 - Rat::new(Int::from(n), Int::from(2)));
            for ci in &c {
                v += Rat::from_integer(ci.clone());
            }
            return Some(v);
        }
        if i == 0 && j < curve_index {
            return Some(Rat::from_integer(q[j - 1].clone()));
        }
        if i == j && i < curve_index {
            return Some(Rat::from_integer(Int::from(-2) * &q[i - 1]));
        }
        if j == curve_index {
            if i >= 1 && i < curve_index {
                return Some(Rat::zero());
            }
            return None;
        }
        Some(Rat::zero())
    });

    let mut h2_labels = vec!["hD".to_string()];
    h2_labels.extend(labels("c", n));
    h2_labels.push("cS".to_string());
    let h2 = Lattice::new(h2_labels)
        .with_bilinear(bilinear)
        .expect("rank matches");
    Ok(SurfaceModel {
        name: "Dtilde".to_string(),
        h2,
        h1_is_zero: true,
    })
}

/// A plane double locus: rank-1 degree-2 lattice generated by the line class
/// with self-intersection 1.
pub fn plane_double_locus(name: impl Into<String>) -> SurfaceModel {
    let h2 = Lattice::new(vec!["omega".to_string()])
        .with_bilinear(BilinearForm::from_sorted_fn(1, |_, _| Some(Rat::one())))
        .expect("rank matches");
    SurfaceModel {
        name: name.into(),
        h2,
        h1_is_zero: true,
    }
}
