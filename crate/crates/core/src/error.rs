use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("anisotropy must be a non-negative number, got {0}")]
    NegativeAnisotropy(f64),

    #[error("exchange coupling must be positive, got {0}")]
    NonPositiveCoupling(f64),

    #[error("matrix is {rows}x{cols}, expected {expected}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        expected: String,
    },

    #[error("operator dimension {0} exceeds the configured cap of {1}")]
    DimensionTooLarge(usize, usize),

    #[error("site count {0} outside supported range {1}..={2}")]
    SiteCountOutOfRange(usize, usize, usize),

    #[error("matrix is not symmetric: |A[{i},{j}] - A[{j},{i}]| = {deviation}")]
    NotSymmetric { i: usize, j: usize, deviation: f64 },

    #[error("Jacobi sweep cap ({sweeps}) reached with off-diagonal norm {off_norm}")]
    EigNotConverged { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {0}")]
    NotPositiveSemidefinite(f64),

    #[error("invalid site subset: {0}")]
    InvalidSiteSubset(String),

    #[error("not a two-qubit density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("concurrence must lie in [0, 1], got {0}")]
    ConcurrenceOutOfRange(f64),

    #[error("quantum-group parameter must be nonzero")]
    ZeroQgParameter,

    #[error("quantum-group parameter must be a unit-modulus phase or a positive real, got {0}")]
    InadmissibleQgParameter(String),

    #[error("boundary coupling is imaginary at this q; no real matrix form exists")]
    ComplexBoundaryTerm,

    #[error("quantum-group rescaling factor has a singular denominator at delta = {0}")]
    SingularXiDenominator(f64),

    #[error("no interior minimum of the derivative in ({lo}, {hi}] at step {step}")]
    NoInteriorMinimum { lo: f64, hi: f64, step: usize },

    #[error("power-law fit needs at least {needed} points, got {got}")]
    TooFewFitPoints { needed: usize, got: usize },

    #[error("power-law fit requires positive values for the log, got {0}")]
    NonPositiveLogArgument(f64),

    #[error("ground-space degeneracy is {got}, expected {expected}")]
    UnexpectedDegeneracy { got: usize, expected: usize },

    #[error("no ground vector with total Sz = {0}/2 in the degenerate space")]
    MissingSzSector(i32),
}

pub type Result<T> = std::result::Result<T, Error>;
