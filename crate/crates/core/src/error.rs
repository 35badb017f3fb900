use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial {0:?} is reducible")]
    Reducible(Vec<u32>),
    #[error("malformed polynomial: {0}")]
    BadPoly(String),
    #[error("field size out of range: {0}")]
    Overflow(String),
    #[error("element is not a square")]
    NonSquare,
    #[error("operation requires odd characteristic")]
    CharTwo,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("determinant is not a nonzero square")]
    NonSquareDet,
    #[error("codes are stored with m >= n; got {m}x{n}, transpose first")]
    WrongOrientation { m: usize, n: usize },
    #[error("enumeration of {count} items exceeds the cap of {cap}")]
    TooLarge { count: u128, cap: u64 },
    #[error("code dimension parameter ell = {ell} is out of range for n = {n}")]
    BadEll { ell: usize, n: usize },
    #[error("n = {0} is odd")]
    OddN(usize),
    #[error("empty (zero) code")]
    EmptyCode,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}
