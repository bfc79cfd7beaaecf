use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NO_DRIVER: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] depthseg::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Input(String),
    #[error("writing CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing output: {0}")]
    Output(String),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        use depthseg::Error as E;
        match self {
            CliError::Core(E::NoDriverFound | E::NotHuman) => EXIT_NO_DRIVER,
            CliError::Core(
                E::Io { .. }
                | E::MalformedHeader(_)
                | E::UnsupportedMaxval(_)
                | E::TruncatedPayload { .. }
                | E::DimensionMismatch { .. }
                | E::EmptyHistogram
                | E::InvalidConfig(_)
                | E::InvalidSpec(_),
            ) => EXIT_INPUT,
            CliError::Core(_) => EXIT_INTERNAL,
            CliError::Io { .. } | CliError::Json { .. } | CliError::Input(_) => EXIT_INPUT,
            CliError::Csv(_) | CliError::Output(_) => EXIT_INTERNAL,
        }
    }
}
