//! The glued normal-crossing central fiber and its compatibility kernels.
//!
//! A degree-q global class is one coordinate vector per component; it lies in
//! the compatibility kernel G^q exactly when its restrictions agree on every
//! double locus. The kernel is computed by stacking the
//! difference-of-restriction maps of all double loci into one integral matrix
//! and taking its saturated integer kernel. Only pairwise compatibility is
//! enforced; the triple curves impose no extra equations in degrees 2 and 4.

use std::fmt;

use num_traits::Zero;

use crate::component::{ComponentModel, SurfaceModel};
use crate::error::FiberError;
use crate::lattice::Lattice;
use crate::matrix::{ExactMatrix, Int, Rat};
use crate::snf::integer_kernel_basis;

/// Cohomology degree supported by the engine. The fiber dimension is fixed at
/// three, so the two middle even degrees 2 and 4 = 2*(3-1)-2 are the only
/// ones in play; anything else fails loudly at the type level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Two,
    Four,
}

impl Degree {
    pub fn value(self) -> u8 {
        match self {
            Degree::Two => 2,
            Degree::Four => 4,
        }
    }

    /// The complementary degree under the cup pairing on a 3-fold.
    pub fn complement(self) -> Degree {
        match self {
            Degree::Two => Degree::Four,
            Degree::Four => Degree::Two,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A degree-q class given by one integer coordinate vector per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalClass {
    pub degree: Degree,
    pub per_component: Vec<Vec<Int>>,
}

impl GlobalClass {
    pub fn new(degree: Degree, per_component: Vec<Vec<Int>>) -> Self {
        Self {
            degree,
            per_component,
        }
    }

    pub fn zero(fiber: &NormalCrossingFiber, degree: Degree) -> Self {
        let per_component = fiber
            .components
            .iter()
            .map(|c| vec![Int::zero(); fiber.rank_of(c, degree)])
            .collect();
        Self {
            degree,
            per_component,
        }
    }

    /// Flat coordinate vector in the fiber's block layout.
    pub fn flatten(&self) -> Vec<Int> {
        self.per_component.iter().flatten().cloned().collect()
    }

    pub fn scale(&self, factor: &Int) -> Self {
        Self {
            degree: self.degree,
            per_component: self
                .per_component
                .iter()
                .map(|block| block.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }
}

/// One side of a double locus: a component index plus the index of the
/// boundary entry inside that component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocusSide {
    pub component: usize,
    pub boundary: usize,
}

/// A double locus with its shared surface model and its two sides.
#[derive(Debug, Clone)]
pub struct DoubleLocus {
    pub surface: SurfaceModel,
    pub side_a: LocusSide,
    pub side_b: LocusSide,
}

/// Gluing directive for `assemble`: a surface and the two
/// (component name, boundary name) references it identifies.
#[derive(Debug, Clone)]
pub struct GluingSpec {
    pub surface: SurfaceModel,
    pub side_a: (String, String),
    pub side_b: (String, String),
}

/// The assembled central fiber. Immutable once built; absent intersections
/// (such as disjoint pairs of components) are simply absent loci.
#[derive(Debug, Clone)]
pub struct NormalCrossingFiber {
    components: Vec<ComponentModel>,
    double_loci: Vec<DoubleLocus>,
    triple_locus_notes: Vec<String>,
}

/// Validates the gluing references and dimensions and builds the fiber.
pub fn assemble(
    components: Vec<ComponentModel>,
    gluing: Vec<GluingSpec>,
    triple_locus_notes: Vec<String>,
) -> Result<NormalCrossingFiber, FiberError> {
    let mut double_loci = Vec::with_capacity(gluing.len());
    let mut used_sides: Vec<LocusSide> = Vec::new();
    let mut used_surfaces: Vec<String> = Vec::new();

    let resolve = |(component, boundary): &(String, String)| -> Result<LocusSide, FiberError> {
        let ci = components
            .iter()
            .position(|c| c.name() == component)
            .ok_or_else(|| FiberError::DanglingComponent {
                name: component.clone(),
            })?;
        let bi = components[ci]
            .boundary_index(boundary)
            .ok_or_else(|| FiberError::DanglingBoundary {
                component: component.clone(),
                boundary: boundary.clone(),
            })?;
        Ok(LocusSide {
            component: ci,
            boundary: bi,
        })
    };

    for spec in gluing {
        let side_a = resolve(&spec.side_a)?;
        let side_b = resolve(&spec.side_b)?;
        if side_a == side_b {
            return Err(FiberError::DuplicateLocus {
                reference: format!("{}/{}", spec.side_a.0, spec.side_a.1),
            });
        }
        for side in [side_a, side_b] {
            if used_sides.contains(&side) {
                let c = &components[side.component];
                return Err(FiberError::DuplicateLocus {
                    reference: format!("{}/{}", c.name(), c.boundary()[side.boundary].surface),
                });
            }
            used_sides.push(side);
        }
        if used_surfaces.contains(&spec.surface.name) {
            return Err(FiberError::DuplicateLocus {
                reference: spec.surface.name.clone(),
            });
        }
        used_surfaces.push(spec.surface.name.clone());

        let surface_rank = spec.surface.h2.rank();
        for side in [side_a, side_b] {
            let c = &components[side.component];
            let b = &c.boundary()[side.boundary];
            if b.restriction2.rows() != surface_rank {
                return Err(FiberError::LocusDimensionMismatch {
                    surface: spec.surface.name.clone(),
                    context: format!(
                        "side {}: degree-2 restriction has {} rows, surface rank is {surface_rank}",
                        c.name(),
                        b.restriction2.rows()
                    ),
                });
            }
            // Column counts against the owning component's rank were already
            // checked at component construction; re-checked here because the
            // fiber is the trust boundary.
            if b.restriction2.cols() != c.h2().rank() {
                return Err(FiberError::LocusDimensionMismatch {
                    surface: spec.surface.name.clone(),
                    context: format!(
                        "side {}: degree-2 restriction has {} columns, component rank is {}",
                        c.name(),
                        b.restriction2.cols(),
                        c.h2().rank()
                    ),
                });
            }
        }
        double_loci.push(DoubleLocus {
            surface: spec.surface,
            side_a,
            side_b,
        });
    }

    Ok(NormalCrossingFiber {
        components,
        double_loci,
        triple_locus_notes,
    })
}

/// A basis of the compatibility kernel, both as global classes and as the
/// column matrix in the fiber's block layout.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    pub classes: Vec<GlobalClass>,
    pub lattice: Lattice,
    pub basis_matrix: ExactMatrix,
}

/// Per-locus residual of a membership check.
#[derive(Debug, Clone)]
pub struct LocusResidual {
    pub locus: String,
    pub entries: Vec<Int>,
}

/// Outcome of a membership check, with residuals for diagnostics.
#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub compatible: bool,
    pub residuals: Vec<LocusResidual>,
}

impl NormalCrossingFiber {
    pub fn components(&self) -> &[ComponentModel] {
        &self.components
    }

    pub fn double_loci(&self) -> &[DoubleLocus] {
        &self.double_loci
    }

    pub fn triple_locus_notes(&self) -> &[String] {
        &self.triple_locus_notes
    }

    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|c| c.name() == name)
    }

    fn rank_of(&self, component: &ComponentModel, degree: Degree) -> usize {
        match degree {
            Degree::Two => component.h2().rank(),
            Degree::Four => component.h4().rank(),
        }
    }

    /// Block layout of degree-q coordinates: per-component ranks.
    pub fn block_ranks(&self, degree: Degree) -> Vec<usize> {
        self.components
            .iter()
            .map(|c| self.rank_of(c, degree))
            .collect()
    }

    fn check_class_shape(&self, class: &GlobalClass) -> Result<(), FiberError> {
        if class.per_component.len() != self.components.len() {
            return Err(FiberError::ComponentCountMismatch {
                expected: self.components.len(),
                got: class.per_component.len(),
            });
        }
        for (c, block) in self.components.iter().zip(&class.per_component) {
            let expected = self.rank_of(c, class.degree);
            if block.len() != expected {
                return Err(FiberError::CoordinateMismatch {
                    component: c.name().to_string(),
                    expected,
                    got: block.len(),
                });
            }
        }
        Ok(())
    }

    /// The stacked difference-of-restrictions matrix whose integer kernel is
    /// G^q. For degree 4 the restriction to a locus is its intersection
    /// number with the locus, one row per locus.
    pub fn constraint_matrix(&self, degree: Degree) -> ExactMatrix {
        let ranks = self.block_ranks(degree);
        let offsets: Vec<usize> = ranks
            .iter()
            .scan(0usize, |acc, r| {
                let v = *acc;
                *acc += r;
                Some(v)
            })
            .collect();
        let total: usize = ranks.iter().sum();

        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for locus in &self.double_loci {
            let eq_rows = match degree {
                Degree::Two => locus.surface.h2.rank(),
                Degree::Four => 1,
            };
            for er in 0..eq_rows {
                let mut row = vec![Rat::zero(); total];
                for (side, sign) in [(locus.side_a, 1i64), (locus.side_b, -1i64)] {
                    let c = &self.components[side.component];
                    let b = &c.boundary()[side.boundary];
                    let off = offsets[side.component];
                    match degree {
                        Degree::Two => {
                            for col in 0..b.restriction2.cols() {
                                let v = b.restriction2.at(er, col) * Rat::from_integer(Int::from(sign));
                                row[off + col] = &row[off + col] + v;
                            }
                        }
                        Degree::Four => {
                            for (col, v) in b.restriction4.iter().enumerate() {
                                let v = Rat::from_integer(v * Int::from(sign));
                                row[off + col] = &row[off + col] + v;
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return ExactMatrix::zeros(0, total);
        }
        ExactMatrix::from_rows(rows).expect("rows are rectangular by construction")
    }

    fn check_hypotheses(&self) -> Result<(), FiberError> {
        for locus in &self.double_loci {
            if !locus.surface.h1_is_zero {
                return Err(FiberError::HypothesisViolation {
                    locus: locus.surface.name.clone(),
                });
            }
        }
        Ok(())
    }

    /// Basis of the compatibility kernel G^q. Refuses to run if any double
    /// locus lacks the vanishing hypothesis.
    pub fn compatibility_kernel(&self, degree: Degree) -> Result<KernelBasis, FiberError> {
        self.check_hypotheses()?;
        let constraints = self.constraint_matrix(degree);
        let kernel = integer_kernel_basis(&constraints)
            .expect("constraint matrix is integral by construction");
        let ranks = self.block_ranks(degree);
        let mut classes = Vec::with_capacity(kernel.cols());
        for j in 0..kernel.cols() {
            let col = kernel.col(j);
            let mut per_component = Vec::with_capacity(ranks.len());
            let mut cursor = 0;
            for r in &ranks {
                per_component.push(
                    col[cursor..cursor + r]
                        .iter()
                        .map(|v| v.to_integer())
                        .collect(),
                );
                cursor += r;
            }
            classes.push(GlobalClass::new(degree, per_component));
        }
        let labels = (1..=classes.len()).map(|i| format!("g{i}")).collect();
        Ok(KernelBasis {
            classes,
            lattice: Lattice::new(labels),
            basis_matrix: kernel,
        })
    }

    /// Checks whether the class restricts compatibly across every double
    /// locus, returning the per-locus residuals either way.
    pub fn membership_check(&self, class: &GlobalClass) -> Result<MembershipReport, FiberError> {
        self.check_class_shape(class)?;
        let mut residuals = Vec::with_capacity(self.double_loci.len());
        let mut compatible = true;
        for locus in &self.double_loci {
            let restrict = |side: LocusSide| -> Vec<Int> {
                let c = &self.components[side.component];
                let b = &c.boundary()[side.boundary];
                let coords = &class.per_component[side.component];
                match class.degree {
                    Degree::Two => b
                        .restriction2
                        .mul_int_vec(coords)
                        .expect("shape checked at assembly"),
                    Degree::Four => {
                        vec![b.restriction4.iter().zip(coords).map(|(a, x)| a * x).sum()]
                    }
                }
            };
            let a = restrict(locus.side_a);
            let b = restrict(locus.side_b);
            let entries: Vec<Int> = a.into_iter().zip(b).map(|(x, y)| x - y).collect();
            if entries.iter().any(|e| !e.is_zero()) {
                compatible = false;
            }
            residuals.push(LocusResidual {
                locus: locus.surface.name.clone(),
                entries,
            });
        }
        Ok(MembershipReport {
            compatible,
            residuals,
        })
    }
}
