use thiserror::Error;

/// Unified error type for the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// An input that must be finite was NaN or infinite.
    #[error("{context}: value must be finite")]
    NonFinite { context: &'static str },

    /// A parameter was outside its documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A parameter combination the library deliberately does not model.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    /// The integrated state left the sane region; gains or timing are broken.
    #[error("simulation diverged at t = {t} s: |{axis}| = {value:e} exceeds {limit:e}")]
    Diverged {
        t: f64,
        axis: &'static str,
        value: f64,
        limit: f64,
    },

    /// A smoothed track was updated after invalidation.
    #[error("stale track: target unseen for {missed} consecutive frames (max hold {max_hold})")]
    StaleTrack { missed: u32, max_hold: u32 },

    /// Not enough samples to compute the requested statistic.
    #[error("insufficient data: need at least {required} samples, got {actual}")]
    InsufficientData { required: usize, actual: usize },

    /// Parse failure in an external data format (PNM image, CSV stream).
    #[error("malformed {format}: {reason}")]
    MalformedData { format: &'static str, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
