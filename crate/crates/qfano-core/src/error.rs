//! Error types, one enum per subsystem, with an umbrella [`Error`] that maps
//! every failure to a process exit class.

use thiserror::Error;

/// Failures of the exact linear-algebra layer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("matrix entry at ({row}, {col}) is not an integer")]
    NonIntegralMatrix { row: usize, col: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("entry count {got} does not match shape {rows}x{cols}")]
    BadEntryCount { rows: usize, cols: usize, got: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("form entry {indices:?} is unspecified but was multiplied with a nonzero coefficient")]
    UnspecifiedFormEntry { indices: Vec<usize> },
    #[error("form is not symmetric at indices {indices:?}")]
    AsymmetricForm { indices: Vec<usize> },
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

/// Failures of scenario validation and the blow-up intersection models.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("h^3 must be positive, got {h3}")]
    CubeNotPositive { h3: String },
    #[error("2*h^3 must be an integer, got h^3 = {h3}")]
    CubeNotHalfIntegral { h3: String },
    #[error("r must be odd (an even r would make the canonical class Cartier), got {r}")]
    EvenAnticanonicalMultiple { r: String },
    #[error("r must be positive, got {r}")]
    NonPositiveAnticanonicalMultiple { r: String },
    #[error("a scenario needs at least one half-point singularity")]
    NoSingularPoints,
    #[error("expected {expected} multiplicities, got {got}")]
    MultiplicityCountMismatch { expected: usize, got: usize },
    #[error("multiplicity at index {index} must be nonnegative")]
    NegativeMultiplicity { index: usize },
    #[error(
        "parity violation at point {index}: multiplicity {q} and degree {k} differ mod 2, \
         so the class is not Cartier-compatible there"
    )]
    ParityViolation { index: usize, k: String, q: String },
}

/// Failures of central-fiber assembly and compatibility-kernel computation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FiberError {
    #[error("gluing references unknown component {name}")]
    DanglingComponent { name: String },
    #[error("component {component} has no boundary surface named {boundary}")]
    DanglingBoundary { component: String, boundary: String },
    #[error("double locus {surface}: {context}")]
    LocusDimensionMismatch { surface: String, context: String },
    #[error("duplicate double locus: {reference}")]
    DuplicateLocus { reference: String },
    #[error("double locus {locus} does not satisfy the vanishing hypothesis h^1 = 0")]
    HypothesisViolation { locus: String },
    #[error("class block for component {component} has {got} coordinates, expected {expected}")]
    CoordinateMismatch {
        component: String,
        expected: usize,
        got: usize,
    },
    #[error("class has {got} component blocks, fiber has {expected} components")]
    ComponentCountMismatch { expected: usize, got: usize },
}

/// Failures of cup-product evaluation and the pairing certificate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SmoothingError {
    #[error("degree mismatch: expected a degree-{expected} class, got degree {got}")]
    DegreeMismatch { expected: u8, got: u8 },
    #[error("certificate needs {k} classes on each side, got {a_len} and {b_len}")]
    SizeMismatch { k: usize, a_len: usize, b_len: usize },
    #[error("class does not fit the fiber: {context}")]
    ShapeMismatch { context: String },
    #[error("component {component} carries no triple cup products")]
    MissingTripleProducts { component: String },
    #[error("certificate is not unimodular (|det| != 1); no smooth-fiber lattice is induced")]
    NotUnimodular,
    #[error("certificate is inadmissible: the h^{{2,0}} = 0 premise was not granted")]
    Inadmissible,
    #[error("induced cup product entry {indices:?} is not an integer: {value}")]
    NonIntegralCupProduct { indices: Vec<usize>, value: String },
}

/// Failures of the end-to-end verification pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("no positive integer a satisfies a^3 * {generator} = {pullback}")]
    NoIntegerSolution { pullback: String, generator: String },
    #[error("cube inputs must be positive, got pullback {pullback}, generator {generator}")]
    NonPositiveCube { pullback: String, generator: String },
    #[error("computed Euler number {computed} contradicts the reference value {reference}")]
    ReferenceMismatch { computed: String, reference: String },
}

/// Failures of configuration parsing (file level, before any verification runs).
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field} is not a rational number: {value}")]
    BadRational { field: String, value: String },
    #[error("matrix file, line {line}: {token} is not an integer")]
    BadMatrixEntry { line: usize, token: String },
    #[error("matrix file, line {line}: row has {got} entries, expected {expected}")]
    RaggedMatrix { line: usize, expected: usize, got: usize },
    #[error("matrix file contains no rows")]
    EmptyMatrix,
}

/// Exit classification used by the command-line surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitClass {
    /// A verification or model-level failure (exit status 1).
    Verification,
    /// A configuration or parse failure (exit status 2).
    Config,
    /// An internal invariant breach (exit status 3).
    Internal,
}

impl ExitClass {
    pub fn code(self) -> i32 {
        match self {
            ExitClass::Verification => 1,
            ExitClass::Config => 2,
            ExitClass::Internal => 3,
        }
    }
}

/// Umbrella error for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Smoothing(#[from] SmoothingError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl Error {
    pub fn exit_class(&self) -> ExitClass {
        match self {
            Error::Lattice(LatticeError::Internal(_)) => ExitClass::Internal,
            Error::Smoothing(SmoothingError::NonIntegralCupProduct { .. }) => ExitClass::Internal,
            Error::Config(_) => ExitClass::Config,
            _ => ExitClass::Verification,
        }
    }
}
