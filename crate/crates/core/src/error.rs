use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e} exceeds {tolerance:e})")]
    NotHermitian { asymmetry: f64, tolerance: f64 },
    #[error("matrix is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
    #[error("iterative decomposition did not converge: {0}")]
    NoConvergence(&'static str),
    #[error("eigenvalue at -1 (angle gap {gap:e}); the principal logarithm is ambiguous")]
    BranchAmbiguity { gap: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("size {size} exceeds the supported maximum {max}")]
    TooLarge { size: usize, max: usize },
    #[error("polynomial has degree zero after trimming")]
    DegreeZero,
    #[error("point {0} lies outside the domain of the space")]
    OutOfDomain(String),
    #[error("weighted kernel series diverges or fails to converge at |w z| = {0}")]
    SeriesDivergence(f64),
    #[error("kernel function vanishes at {0}")]
    ZeroKernel(String),
    #[error("point set is empty")]
    EmptySet,
    #[error("point set contains a repeated point {0}")]
    DuplicatePoint(String),
    #[error("point sets intersect at {0}")]
    SetsIntersect(String),
    #[error("cardinality mismatch: |A| = {a}, |B| = {b}")]
    CardinalityMismatch { a: usize, b: usize },
    #[error("kernel functions are numerically linearly dependent (condition {condition:e})")]
    LinearlyDependentKernels { condition: f64 },
    #[error("system is ill-conditioned (condition {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("zero denominator in closed-form determinant")]
    ZeroDenominator,
    #[error("only {found} roots lie inside the disk, {needed} needed")]
    InsufficientInteriorRoots { found: usize, needed: usize },
    #[error("deflated polynomial has no admissible root inside the disk")]
    NoInteriorRoot,
    #[error("deflated polynomial is degenerate (degree {0})")]
    DegenerateQuadratic(usize),
    #[error("sum of complementary projections is singular")]
    SingularSum,
    #[error("Blaschke factor pole within numerical tolerance of {0}")]
    PoleOnBoundaryNumerics(String),
    #[error("boundary grid too coarse: estimates did not stabilise after {points} samples")]
    GridTooCoarse { points: usize },
    #[error("symbol vanishes on the contour (|h| = {0:e})")]
    ZeroOnContour(f64),
    #[error("argument alpha = {0} is within tolerance of a multiple of pi")]
    AlphaDegenerate(f64),
    #[error("double precision cannot separate the paired point from {0}")]
    PrecisionExhausted(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
