use thiserror::Error;

/// Errors raised anywhere in the simulation chain.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("zero-forcing equalizer singular at bins {bins:?}")]
    EqualizationSingular { bins: Vec<usize> },
    #[error("cannot equalize spectral efficiency: target {target:.6}, closest achievable {closest:.6} (knob value {knob_value})")]
    CannotEqualize {
        target: f64,
        closest: f64,
        knob_value: usize,
    },
    #[error("allocation error: {0}")]
    AllocationError(String),
    #[error("frame of {len} samples is shorter than the {span}-sample filter span")]
    FrameTooShort { len: usize, span: usize },
    #[error("range error: {0}")]
    RangeError(String),
    #[error("manifest error: {0}")]
    ManifestError(String),
    #[error("scenario {id}: {message}")]
    Scenario { id: String, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
