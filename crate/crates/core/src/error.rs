use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlateError {
    #[error("mesh parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("mesh topology error: {0}")]
    Topology(String),

    #[error("degenerate triangle {0} (zero area)")]
    DegenerateTriangle(usize),

    #[error(
        "boundary vertex {vertex} has no interior vertex within two edges; \
         the clamped multiplier space needs every triangle to reach an interior vertex \
         (refine the mesh or split triangles whose vertices all lie on the boundary)"
    )]
    AllBoundaryTriangle { vertex: usize },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch { what: String, expected: usize, found: usize },

    #[error("static condensation needs a diagonal rotation/multiplier Gram matrix (use the dual multiplier)")]
    NonDiagonalGram,

    #[error("zero diagonal entry {0} in the rotation/multiplier Gram matrix")]
    ZeroDiagonal(usize),

    #[error("singular system: zero pivot in the {block} block")]
    Singular { block: &'static str },

    #[error("reduced operator is not positive definite")]
    NotPositiveDefinite,

    #[error("reduced operator asymmetry {0:e} exceeds tolerance; assembly is inconsistent")]
    Asymmetric(f64),

    #[error("linear solve inaccurate: relative residual {0:e}")]
    InaccurateSolve(f64),

    #[error("problem too large for dense computation: {unknowns} unknowns (limit {limit})")]
    TooLarge { unknowns: usize, limit: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, PlateError>;
