//! Crate-wide error type and result alias.

use std::path::PathBuf;

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of profile construction, identity checks, grid operators,
/// scattering solves and the command-line layer.
#[derive(Debug, Error)]
pub enum Error {
    /// Grid bounds or point count rejected.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Field data rejected (length mismatch or non-finite sample).
    #[error("invalid field: {0}")]
    InvalidField(String),

    /// A parameter fails its domain restriction.
    #[error("invalid parameter {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// A family matching condition between profile and wave parameters
    /// does not hold.
    #[error("matching condition violated: {relation} (relative deviation {deviation:.3e})")]
    MatchingConditionViolated { relation: String, deviation: f64 },

    /// The energy relation of a matched family does not hold.
    #[error("energy mismatch: {relation} (relative deviation {deviation:.3e})")]
    EnergyMismatch { relation: String, deviation: f64 },

    /// Parity reflection needs a grid symmetric about z = 0.
    #[error("asymmetric grid: z_start = {z_start}, z_end = {z_end}")]
    AsymmetricGrid { z_start: f64, z_end: f64 },

    /// Two fields that must share one grid do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Transfer-matrix determinant drifted away from one.
    #[error("degenerate transfer matrix: |det - 1| = {deviation:.3e}")]
    DegenerateTransferMatrix { deviation: f64 },

    /// Scattering requires a strictly positive wavenumber.
    #[error("non-positive wavenumber: {value}")]
    NonPositiveWavenumber { value: f64 },

    /// An element of a parameter sweep failed.
    #[error("sweep element {index}: {source}")]
    SweepElement {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// A strictly positive input was zero or negative.
    #[error("non-positive input {name}: {value}")]
    NonPositiveInput { name: &'static str, value: f64 },

    /// Particle preset not recognised.
    #[error("unknown particle: {name}")]
    UnknownParticle { name: String },

    /// Figure preset id out of range.
    #[error("unknown figure: {id} (expected 1, 2 or 3)")]
    UnknownFigure { id: u32 },

    /// Output path could not be written.
    #[error("unwritable path {path}: {source}")]
    UnwritablePath {
        path: PathBuf,
        source: std::io::Error,
    },

    /// Config file could not be read or parsed.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    /// Generic I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit class: 2 for rejected input, 1 for computation or
    /// I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidGrid(_)
            | Error::InvalidField(_)
            | Error::InvalidParameter { .. }
            | Error::MatchingConditionViolated { .. }
            | Error::EnergyMismatch { .. }
            | Error::AsymmetricGrid { .. }
            | Error::GridMismatch(_)
            | Error::NonPositiveWavenumber { .. }
            | Error::NonPositiveInput { .. }
            | Error::UnknownParticle { .. }
            | Error::UnknownFigure { .. }
            | Error::Config { .. } => 2,
            Error::SweepElement { source, .. } => source.exit_code(),
            Error::DegenerateTransferMatrix { .. }
            | Error::UnwritablePath { .. }
            | Error::Io(_) => 1,
        }
    }
}
