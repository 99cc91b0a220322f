use std::io;

/// Errors raised anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("invalid winding (p, q) = ({p}, {q}): need q > p >= 1 and gcd(p, q) = 1")]
    InvalidWinding { p: u32, q: u32 },
    #[error("no shell found: {0}")]
    NotFound(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("tube half-width {width} is smaller than one grid cell ({cell})")]
    EmptyTube { width: f64, cell: f64 },
    #[error("malformed file: {0}")]
    Format(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the `scars` binary.
    ///
    /// 2 usage/configuration, 3 numeric domain, 4 I/O (including malformed files).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Domain(_)
            | Error::Range(_)
            | Error::InvalidWinding { .. }
            | Error::NotFound(_)
            | Error::Degenerate(_)
            | Error::EmptyTube { .. } => 3,
            Error::Format(_) | Error::Io(_) => 4,
        }
    }
}
