use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),

    #[error("unsupported maxval {0} (expected 65535)")]
    UnsupportedMaxval(u32),

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },

    #[error("frame data length {len} does not match {width}x{height}")]
    DimensionMismatch { width: usize, height: usize, len: usize },

    #[error("rect {rect:?} lies outside a {width}x{height} frame")]
    RectOutOfBounds {
        rect: crate::Rect,
        width: usize,
        height: usize,
    },

    #[error("empty histogram: frame has no valid depth pixels")]
    EmptyHistogram,

    #[error("empty mask")]
    EmptyMask,

    #[error("seed ({x}, {y}) lies outside the region of interest")]
    SeedOutsideRoi { x: usize, y: usize },

    #[error("seed depth {0} mm is not a histogram bin")]
    DepthNotInHistogram(u16),

    #[error("no driver found")]
    NoDriverFound,

    #[error("candidate is not classified as human")]
    NotHuman,

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
