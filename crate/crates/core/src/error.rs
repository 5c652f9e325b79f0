use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at (or numerically at) the pole `exp(2 alpha r) = q`.
    #[error("potential pole at r = {r} (singularity radius r0 = {r0})")]
    Pole { r: f64, r0: f64 },

    /// Deformation parameter below the validity bound of the centrifugal approximation.
    #[error("deformation q = {0} is invalid: the centrifugal approximation requires q >= 1")]
    InvalidDeformation(f64),

    /// Vibrational index beyond the last bound level.
    #[error("n = {n} is out of range: {}", match lambda_max {
        Some(m) => format!("the last bound level is n = {m}"),
        None => "no level is bound".to_string(),
    })]
    LevelOutOfRange { n: u32, lambda_max: Option<u32> },

    /// Parameters admit no bound state at all.
    #[error("no bound states: sqrt(eta1) - eta2 = {0} <= 0")]
    NoBoundStates(f64),

    /// A terminating hypergeometric series hit a pole of its lower parameter.
    #[error("hypergeometric pole: lower parameter {c} reaches a non-positive integer at term {k}")]
    HypergeometricPole { c: f64, k: u32 },

    /// Adaptive quadrature did not reach its tolerance.
    #[error("quadrature did not converge: estimate {estimate}, error {error_estimate} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error_estimate: f64,
        intervals: usize,
    },

    /// The Numerov eigenvalue search failed.
    #[error("eigenvalue solver: {0}")]
    Solver(String),

    /// The signed sum for a partition function was not positive.
    #[error("partition function is not positive (value {0:e}); cancellation destroyed the result")]
    NonPositivePartition(f64),

    /// Molecule name not found in the catalog.
    #[error("unknown molecule '{0}'")]
    UnknownMolecule(String),

    /// A molecule record violates its invariants.
    #[error("invalid molecule '{name}': {reason}")]
    InvalidMolecule { name: String, reason: String },

    /// Catalog file could not be parsed.
    #[error("{}:{line}: {reason}", path.display())]
    CatalogParse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    /// I/O failure while reading or writing a catalog.
    #[error("i/o error on {}: {reason}", path.display())]
    Io { path: PathBuf, reason: String },

    /// No embedded reference data for the requested molecule.
    #[error("no reference table data for molecule '{0}'")]
    NoReferenceData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
