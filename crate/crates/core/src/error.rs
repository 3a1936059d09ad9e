use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed input. `locus` names the line or record that failed.
    #[error("parse error in {path} at {locus}: {message}")]
    Parse {
        path: PathBuf,
        locus: String,
        message: String,
    },

    /// A data invariant was violated; the message names the invariant.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unknown team `{0}`")]
    UnknownTeam(String),

    #[error("unknown player `{0}`")]
    UnknownPlayer(String),

    #[error("geometry: {0}")]
    Geometry(String),

    #[error("roles unavailable: {0}")]
    RolesUnavailable(String),

    #[error("table axes differ: {0}")]
    AxisMismatch(String),

    #[error("unknown similarity backend `{0}`")]
    UnknownBackend(String),

    #[error("infeasible scenario parameters: {0}")]
    Infeasible(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(
        path: impl Into<PathBuf>,
        locus: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            path: path.into(),
            locus: locus.into(),
            message: message.into(),
        }
    }
}
