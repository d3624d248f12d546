use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters, grids or quadrature settings.
    #[error("configuration error: {0}")]
    Config(String),

    /// `p0 = 0`: the packet center never reaches the detector.
    #[error("classical arrival time is undefined for zero mean momentum")]
    UndefinedArrival,

    /// The detector sits exactly on the packet center, where the
    /// negative-flow inequality divides by zero.
    #[error("negative-flow condition is undefined with the detector at the packet center")]
    DetectorAtCenter,

    /// `eps = 0`: circular contour, no major axis.
    #[error("major-axis angle is undefined for a minimal uncertainty state (eps = 0)")]
    UndefinedAngle,

    #[error("{name} = {value} lies outside {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("i/o error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
