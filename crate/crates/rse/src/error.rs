use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("fock space dimension must be at least 1")]
    EmptySpace,
    #[error("fock level {level} out of range for dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),
    #[error("duplicate fock level {0} in phase map")]
    DuplicateLevel(usize),
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("target states are not pairwise orthonormal (residual {0:e})")]
    NonOrthonormalTargets(f64),
    #[error("unreachable target {index}: |overlap| = {overlap:e} below floor")]
    UnreachableTarget { index: usize, overlap: f64 },
    #[error("reference state lies (numerically) inside the target span")]
    DegenerateSubspace,
    #[error("resonance violated: |H11 - H22| = {0:e}")]
    ResonanceViolated(f64),
    #[error("off-diagonal coupling vanishes; phase undefined")]
    UndefinedPhase,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("degenerate data for fit (all abscissas equal)")]
    DegenerateFit,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
