use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::is_precondition`] separates caller mistakes (bad parameters,
/// refused budgets) from internal failures; the CLI maps the former to exit
/// code 2 and the latter to exit code 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid polynomial: {0}")]
    InvalidPoly(String),
    #[error("q = {q} divides the degree k = {k}")]
    CharacteristicDividesDegree { q: u64, k: u32 },
    #[error("budget exceeded: estimated {estimate:.3e} operations, limit {limit:.3e}")]
    Budget { estimate: f64, limit: f64 },
    #[error("parameter point outside the admissible domain: {0}")]
    OutsideDomain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cache file checksum mismatch")]
    Checksum,
    #[error("cache file version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by invalid inputs rather than internal faults.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
