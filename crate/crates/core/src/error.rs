use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("singular symbol value at wavenumber ({0}, {1}, {2})")]
    SingularSymbol(f64, f64, f64),

    #[error("dyadic index {k} outside the representable range [{min}, {max}]")]
    DyadicRange { k: i32, min: i32, max: i32 },

    #[error("cutoff radius {radius} must be below half the box length {half}")]
    CutoffExceedsBox { radius: f64, half: f64 },

    #[error("reality violation: relative imaginary residue {0:e}")]
    Reality(f64),

    #[error("singular direction: {0}")]
    SingularDirection(&'static str),

    #[error("range error: {0}")]
    Range(String),

    #[error("solution diverged at step {step} (t = {t})")]
    Divergence { step: usize, t: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no snapshot stored at t = {0}")]
    Lookup(f64),

    #[error("profile width {sigma} does not fit the box (needs < L/8 = {limit})")]
    BoxFit { sigma: f64, limit: f64 },

    #[error("initial data violates the smallness hypotheses: {0}")]
    DataValidation(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Format(#[from] FormatError),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

/// Errors raised while decoding a snapshot file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("bad magic bytes {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(u16),

    #[error("unknown snapshot flags {0:#06x}")]
    UnknownFlags(u16),

    #[error("invalid header: {0}")]
    InvalidHeader(String),

    #[error("truncated snapshot: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },

    #[error("{0} trailing bytes after snapshot payload")]
    TrailingBytes(usize),
}
