use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Raster dimensions or payload are inconsistent.
    #[error("invalid image: {0}")]
    InvalidImage(String),

    /// A filter, generator or benchmark parameter is out of range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error(transparent)]
    Ppm(#[from] PpmError),

    #[error("png: {0}")]
    Png(String),

    #[error("csv: {0}")]
    Csv(String),

    /// The worker pool could not be created.
    #[error("worker pool: {0}")]
    Resource(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by out-of-range parameters rather than bad input data.
    pub fn is_param_error(&self) -> bool {
        matches!(self, Error::InvalidParam { .. })
    }
}

/// Binary PPM (P6) parse failure. Each variant names the offending header field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PpmError {
    #[error("bad magic: expected P6")]
    BadMagic,
    #[error("missing {0} in header")]
    MissingField(&'static str),
    #[error("invalid {field}: {value:?}")]
    InvalidField { field: &'static str, value: String },
    #[error("unsupported maxval {0} (only 255 is supported)")]
    UnsupportedMaxval(u64),
    #[error("dimension overflow: {width}x{height}")]
    DimensionOverflow { width: u64, height: u64 },
    #[error("{0} bytes of trailing data after payload")]
    TrailingData(usize),
    #[error("truncated payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },
}
