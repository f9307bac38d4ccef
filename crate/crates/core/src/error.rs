use std::io;
use std::path::PathBuf;

/// Coarse failure class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Format,
    Invariant,
    Io,
}

#[derive(Debug, thiserror::Error)]
pub enum NhqError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("format error in {path}: {message} (byte offset {offset})")]
    Format {
        path: PathBuf,
        offset: u64,
        message: String,
    },

    #[error("data error: {0}")]
    Data(String),

    #[error("archive has bad magic bytes")]
    BadMagic,

    #[error("archive format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("archive checksum mismatch")]
    ChecksumMismatch,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl NhqError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            NhqError::Usage(_) | NhqError::DimensionMismatch { .. } => ErrorKind::Usage,
            NhqError::Format { .. }
            | NhqError::Data(_)
            | NhqError::BadMagic
            | NhqError::VersionMismatch { .. }
            | NhqError::ChecksumMismatch => ErrorKind::Format,
            NhqError::Invariant(_) => ErrorKind::Invariant,
            NhqError::Io { .. } => ErrorKind::Io,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        NhqError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        NhqError::Usage(msg.into())
    }
}

pub type Result<T, E = NhqError> = std::result::Result<T, E>;
