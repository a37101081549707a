use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure category, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad or unreadable input data.
    Input,
    /// Valid input on which a computation is undefined.
    Computation,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("citation vector is empty")]
    EmptyInput,

    #[error("total citation count is zero; Lorenz shares are undefined")]
    ZeroTotal,

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("profile has no publications")]
    EmptyProfile,

    #[error("no complete window: first year {first_year} + width {width} - 1 exceeds end year {end_year}")]
    NoWindows {
        first_year: i32,
        width: u32,
        end_year: i32,
    },

    #[error("every window in the series was skipped")]
    AllSkipped,

    #[error("total citations are zero")]
    ZeroCitations,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{}: parse error at line {line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{}: unsupported schema_version {found} (expected 1)", path.display())]
    Schema { path: PathBuf, found: i64 },

    #[error("{}: validation error{}: {message}", path.display(), line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Validation {
        path: PathBuf,
        line: Option<u64>,
        message: String,
    },

    #[error("bad synthesis spec: {0}")]
    BadSpec(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse { .. }
            | Error::Schema { .. }
            | Error::Validation { .. }
            | Error::Io { .. }
            | Error::BadSpec(_)
            | Error::Config(_)
            | Error::EmptyProfile => ErrorKind::Input,
            Error::EmptyInput
            | Error::ZeroTotal
            | Error::OutOfRange { .. }
            | Error::DegenerateFit(_)
            | Error::NoWindows { .. }
            | Error::AllSkipped
            | Error::ZeroCitations => ErrorKind::Computation,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
