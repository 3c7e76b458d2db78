//! Exact integer-lattice engine for normal-crossing degenerations of
//! 3-folds.
//!
//! The crate models the central fiber of a semistable degeneration as a
//! union of components with explicit cohomology lattices, computes the
//! compatibility kernels G^2 and G^4 across the double loci, certifies
//! unimodular cup pairings between them, and extracts the degree-2 lattice
//! of the smooth fiber with its cup product. An end-to-end pipeline applies
//! this to the double cover of a Q-Fano 3-fold with half-point
//! singularities, producing a machine-readable verification report and the
//! invariant record of the cover.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals
//! throughout, with Smith normal forms carrying explicit unimodular
//! transforms so kernels are saturated by construction.

pub mod component;
pub mod config;
pub mod error;
pub mod fiber;
pub mod lattice;
pub mod matrix;
pub mod pipeline;
pub mod report;
pub mod scenario;
pub mod smoothing;
pub mod snf;

pub use component::{
    build_e, build_v1, build_v2, k3_double_locus, plane_double_locus, BoundaryRestriction,
    ComponentModel, SurfaceModel,
};
pub use config::{parse_integer_matrix, Overrides, PremiseFlags, RunConfig};
pub use error::{Error, ExitClass};
pub use fiber::{
    assemble, Degree, DoubleLocus, GlobalClass, GluingSpec, KernelBasis, LocusResidual,
    MembershipReport, NormalCrossingFiber,
};
pub use lattice::{BilinearForm, Lattice, TrilinearForm};
pub use matrix::{int, rat, ExactMatrix, Int, Rat};
pub use pipeline::{
    b_class_with_overrides, build_degeneration_model, primitivity_pipeline, report_invariants,
    run_all, solve_pullback_scale, DegenerationModel, EulerInputs, PrimitivityInputs,
    PrimitivityVerdict,
};
pub use report::{InvariantRecord, Provenance, VerificationReport};
pub use scenario::{
    anticanonical_transform_coords, weil_to_blowup_coords, BlowupCoords, QFanoScenario, WeilClass,
};
pub use smoothing::{
    certify, induced_cup_product, mixed_zero_pairing, mixed_zero_triple, CertificatePremises,
    PairingCertificate, SmoothFiberLattice,
};
pub use snf::{
    integer_kernel_basis, is_injective_primitive, is_unimodular, smith_normal_form, solve_integer,
    LatticeMapReport, SmithDecomposition,
};
