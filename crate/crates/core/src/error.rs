use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("residue {residue} out of range for Z/{modulus}")]
    OutOfRange { residue: u64, modulus: u32 },
    #[error("length {len} does not match group order {modulus}")]
    LengthMismatch { len: usize, modulus: u32 },
    #[error("tuple space of size {size} exceeds cap {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{t} does not divide {order}")]
    NotDivisor { t: u64, order: u64 },
    #[error("function is not invariant under the subgroup")]
    NotInvariant,
    #[error("support not contained in the subgroup")]
    SupportOutsideSubgroup,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("sequence is not strictly convex at index {0}")]
    NotConvex(usize),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
